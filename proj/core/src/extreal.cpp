#include "illiq/extreal.hpp"

namespace illiq {

std::optional<ExtReal> parse_extreal(const std::string& text) {
    if (text == "inf" || text == "+inf") return ExtReal::pos_inf();
    if (text == "-inf") return ExtReal::neg_inf();
    if (auto q = parse_rat(text)) return ExtReal(*q);
    return std::nullopt;
}

}  // namespace illiq
