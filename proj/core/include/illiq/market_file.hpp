#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

#include "illiq/market.hpp"

namespace illiq {

// Input validation failure with enough context to locate the offending field.
class MarketFileError : public std::runtime_error {
  public:
    explicit MarketFileError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NamedDeflator {
    ScalarProcess y;
    VectorProcess s;
};

struct ParsedMarket {
    std::vector<std::string> assets;
    MarketInstance instance;
    std::map<std::string, ScalarProcess> claims;
    std::map<std::string, NamedDeflator> deflators;
};

struct LoadOptions {
    bool allow_float_input = false;  // accept JSON numbers (otherwise exact strings only)
    std::string base_dir;            // resolves relative order-book CSV references
};

// Parses and validates a UTF-8 market description (JSON; numeric fields are
// exact decimal or p/q strings). Unknown fields are rejected. Throws
// MarketFileError with a field path on any violation.
ParsedMarket load_market_text(const std::string& text, const LoadOptions& opt = LoadOptions());
ParsedMarket load_market_file(const std::string& path, LoadOptions opt = LoadOptions());

// FNV-1a over the input bytes; stable across runs.
std::uint64_t content_digest(const std::string& text);

}  // namespace illiq
