#include "illiq/market_file.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "illiq/builders.hpp"

namespace illiq {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& msg) {
    throw MarketFileError(where + ": " + msg);
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, value] : obj.items())
        if (!allowed.count(key)) fail(where, "unknown field '" + key + "'");
}

Rat parse_number(const json& v, const LoadOptions& opt, const std::string& where) {
    if (v.is_string()) {
        if (auto q = parse_rat(v.get<std::string>())) return *q;
        fail(where, "cannot parse exact number '" + v.get<std::string>() + "'");
    }
    if (v.is_number_integer()) return Rat(v.get<long>());
    if (v.is_number_float()) {
        if (!opt.allow_float_input)
            fail(where, "floating-point literal needs --allow-float (use exact strings)");
        return Rat(v.get<double>());
    }
    fail(where, "expected a number");
}

ExtReal parse_ext(const json& v, const LoadOptions& opt, const std::string& where) {
    if (v.is_string()) {
        if (auto e = parse_extreal(v.get<std::string>())) return *e;
        fail(where, "cannot parse extended number '" + v.get<std::string>() + "'");
    }
    return ExtReal(parse_number(v, opt, where));
}

Vec parse_vec(const json& v, size_t dim, const LoadOptions& opt, const std::string& where) {
    if (!v.is_array() || v.size() != dim)
        fail(where, "expected an array of " + std::to_string(dim) + " numbers");
    Vec out;
    for (size_t i = 0; i < dim; ++i) out.push_back(parse_number(v[i], opt, where));
    return out;
}

Pwl parse_pwl(const json& v, const LoadOptions& opt, const std::string& where) {
    if (!v.is_object()) fail(where, "expected a piecewise-linear spec object");
    reject_unknown(v, {"domain", "breakpoints", "slopes"}, where);
    ExtReal lo = ExtReal::neg_inf();
    ExtReal hi = ExtReal::pos_inf();
    if (v.contains("domain")) {
        if (!v["domain"].is_array() || v["domain"].size() != 2) fail(where, "domain must be [lo, hi]");
        lo = parse_ext(v["domain"][0], opt, where);
        hi = parse_ext(v["domain"][1], opt, where);
    }
    std::vector<Rat> breaks, slopes;
    if (v.contains("breakpoints"))
        for (const auto& b : v["breakpoints"]) breaks.push_back(parse_number(b, opt, where));
    if (!v.contains("slopes")) fail(where, "missing slopes");
    for (const auto& s : v["slopes"]) slopes.push_back(parse_number(s, opt, where));
    try {
        return Pwl(lo, hi, std::move(breaks), std::move(slopes), Rat(0), Rat(0));
    } catch (const std::exception& e) {
        fail(where, e.what());
    }
}

OrderBookSide parse_book_side(const json& v, const LoadOptions& opt, const std::string& where) {
    OrderBookSide side;
    if (!v.is_array()) fail(where, "expected an array of [price, depth] pairs");
    for (const auto& lvl : v) {
        if (!lvl.is_array() || lvl.size() != 2) fail(where, "expected [price, depth]");
        side.levels.push_back({parse_number(lvl[0], opt, where), parse_ext(lvl[1], opt, where)});
    }
    return side;
}

CostFunction parse_cost(const json& v, int num_assets, const LoadOptions& opt, const std::string& where) {
    if (!v.is_object() || !v.contains("type")) fail(where, "cost entry needs a type");
    const std::string type = v["type"].get<std::string>();
    const size_t J = static_cast<size_t>(num_assets);
    try {
        if (type == "linear") {
            reject_unknown(v, {"node", "type", "prices"}, where);
            return linear_cost(parse_vec(v.at("prices"), J, opt, where));
        }
        if (type == "bid_ask") {
            reject_unknown(v, {"node", "type", "bid", "ask"}, where);
            return bid_ask_cost(parse_vec(v.at("bid"), J, opt, where),
                                parse_vec(v.at("ask"), J, opt, where));
        }
        if (type == "order_book") {
            reject_unknown(v, {"node", "type", "books"}, where);
            const json& books = v.at("books");
            if (!books.is_array() || books.size() != J) fail(where, "need one book per asset");
            SeparableCost cost;
            for (const auto& book : books) {
                if (book.contains("csv")) {
                    reject_unknown(book, {"csv"}, where);
                    std::string path = book["csv"].get<std::string>();
                    if (!opt.base_dir.empty() && !path.empty() && path[0] != '/')
                        path = opt.base_dir + "/" + path;
                    auto [bid, ask] = load_order_book_csv(path);
                    cost.per_asset.push_back(order_book_cost(bid, ask));
                } else {
                    reject_unknown(book, {"bid", "ask"}, where);
                    OrderBookSide bid, ask;
                    if (book.contains("bid")) bid = parse_book_side(book["bid"], opt, where);
                    if (book.contains("ask")) ask = parse_book_side(book["ask"], opt, where);
                    cost.per_asset.push_back(order_book_cost(bid, ask));
                }
            }
            return cost;
        }
        if (type == "scaled_convex" || type == "market_value") {
            reject_unknown(v, {"node", "type", "prices", "phi"}, where);
            Vec prices = parse_vec(v.at("prices"), J, opt, where);
            const json& phis = v.at("phi");
            if (!phis.is_array() || phis.size() != J) fail(where, "need one phi per asset");
            std::vector<Pwl> phi;
            for (const auto& p : phis) phi.push_back(parse_pwl(p, opt, where));
            return type == "scaled_convex" ? scaled_convex_cost(prices, phi)
                                           : market_value_cost(prices, phi);
        }
        if (type == "set_valued") {
            reject_unknown(v, {"node", "type", "vertices"}, where);
            std::vector<Vec> vertices;
            for (const auto& z : v.at("vertices")) vertices.push_back(parse_vec(z, J, opt, where));
            return set_valued_cost(vertices);
        }
        if (type == "exponential") {
            reject_unknown(v, {"node", "type", "sbar", "alpha", "cash"}, where);
            ExponentialCost ec;
            ec.sbar = parse_number(v.at("sbar"), opt, where);
            ec.alpha = parse_number(v.at("alpha"), opt, where);
            ec.with_cash = v.value("cash", true);
            if (ec.num_assets() != num_assets) fail(where, "exponential cost asset count mismatch");
            return ec;
        }
    } catch (const MarketFileError&) {
        throw;
    } catch (const std::exception& e) {
        fail(where, e.what());
    }
    fail(where, "unknown cost type '" + type + "'");
}

PolyhedralSet parse_constraint(const json& v, int num_assets, const LoadOptions& opt,
                               const std::string& where) {
    if (!v.is_object() || !v.contains("type")) fail(where, "constraint entry needs a type");
    const std::string type = v["type"].get<std::string>();
    const size_t J = static_cast<size_t>(num_assets);
    try {
        if (type == "none") {
            reject_unknown(v, {"node", "type"}, where);
            return PolyhedralSet::whole_space(num_assets);
        }
        if (type == "halfspaces") {
            reject_unknown(v, {"node", "type", "rows"}, where);
            std::vector<PolyhedralSet::Row> rows;
            for (const auto& row : v.at("rows")) {
                reject_unknown(row, {"a", "b"}, where);
                rows.push_back({parse_vec(row.at("a"), J, opt, where),
                                parse_number(row.at("b"), opt, where)});
            }
            return PolyhedralSet(num_assets, std::move(rows));
        }
        if (type == "cone") {
            reject_unknown(v, {"node", "type", "normals", "generators"}, where);
            std::vector<PolyhedralSet::Row> rows;
            if (v.contains("normals")) {
                for (const auto& a : v["normals"]) rows.push_back({parse_vec(a, J, opt, where), Rat(0)});
            } else if (v.contains("generators")) {
                std::vector<Vec> rays;
                for (const auto& r : v["generators"]) rays.push_back(parse_vec(r, J, opt, where));
                const PolyhedralCone cone =
                    cone_convert(PolyhedralCone::from_rays(num_assets, std::move(rays)));
                for (const Vec& a : cone.inequalities()) rows.push_back({a, Rat(0)});
            } else {
                fail(where, "cone needs normals or generators");
            }
            return PolyhedralSet(num_assets, std::move(rows));
        }
        if (type == "matrix_cone") {
            reject_unknown(v, {"node", "type", "M", "K"}, where);
            std::vector<Vec> M;
            for (const auto& row : v.at("M")) M.push_back(parse_vec(row, J, opt, where));
            std::vector<PolyhedralSet::Row> krows;
            for (const auto& row : v.at("K")) {
                reject_unknown(row, {"a", "b"}, where);
                Vec a;
                for (const auto& x : row.at("a")) a.push_back(parse_number(x, opt, where));
                if (a.size() != M.size()) fail(where, "K row dimension must match M row count");
                krows.push_back({std::move(a), parse_number(row.at("b"), opt, where)});
            }
            return matrix_constraint(M, PolyhedralSet(static_cast<int>(M.size()), std::move(krows)));
        }
    } catch (const MarketFileError&) {
        throw;
    } catch (const std::exception& e) {
        fail(where, e.what());
    }
    fail(where, "unknown constraint type '" + type + "'");
}

}  // namespace

ParsedMarket load_market_text(const std::string& text, const LoadOptions& opt) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw MarketFileError(std::string("json parse error: ") + e.what());
    }
    if (!doc.is_object()) throw MarketFileError("top level must be an object");
    reject_unknown(doc, {"assets", "tree", "costs", "constraints", "claims", "deflators"}, "top level");

    if (!doc.contains("assets") || !doc["assets"].is_array() || doc["assets"].empty())
        throw MarketFileError("assets: need a nonempty name array");
    std::vector<std::string> assets;
    for (const auto& a : doc["assets"]) assets.push_back(a.get<std::string>());
    const int J = static_cast<int>(assets.size());

    if (!doc.contains("tree") || !doc["tree"].is_array()) throw MarketFileError("tree: need a node array");
    std::vector<EventTree::Node> nodes;
    for (const auto& n : doc["tree"]) {
        const std::string where = "tree node " + std::to_string(nodes.size());
        reject_unknown(n, {"id", "parent", "time", "prob"}, where);
        EventTree::Node node;
        node.id = n.at("id").get<int>();
        node.parent = n.at("parent").is_null() ? -1 : n.at("parent").get<int>();
        node.time = n.at("time").get<int>();
        node.prob = parse_number(n.at("prob"), opt, where + " prob");
        nodes.push_back(std::move(node));
    }

    EventTree tree = [&] {
        try {
            return EventTree(std::move(nodes));
        } catch (const std::exception& e) {
            throw MarketFileError(e.what());
        }
    }();
    const size_t N = static_cast<size_t>(tree.num_nodes());

    auto per_node = [&](const char* section, auto parse_entry, auto&& default_value) {
        using Out = decltype(default_value(0));
        std::vector<std::optional<Out>> slots(N);
        if (doc.contains(section)) {
            for (const auto& entry : doc[section]) {
                const std::string where = std::string(section) + " entry";
                if (!entry.is_object() || !entry.contains("node")) fail(where, "missing node id");
                const int id = entry["node"].get<int>();
                if (id < 0 || id >= static_cast<int>(N)) fail(where, "node id out of range");
                if (slots[static_cast<size_t>(id)]) fail(where, "duplicate entry for node " + std::to_string(id));
                slots[static_cast<size_t>(id)] =
                    parse_entry(entry, std::string(section) + " node " + std::to_string(id));
            }
        }
        std::vector<Out> out;
        for (size_t i = 0; i < N; ++i)
            out.push_back(slots[i] ? std::move(*slots[i]) : default_value(static_cast<int>(i)));
        return out;
    };

    if (!doc.contains("costs")) throw MarketFileError("costs: section required");
    std::vector<CostFunction> costs =
        per_node("costs", [&](const json& e, const std::string& w) { return parse_cost(e, J, opt, w); },
                 [&](int id) -> CostFunction {
                     throw MarketFileError("costs: missing entry for node " + std::to_string(id));
                 });
    std::vector<PolyhedralSet> sets = per_node(
        "constraints",
        [&](const json& e, const std::string& w) { return parse_constraint(e, J, opt, w); },
        [&](int) { return PolyhedralSet::whole_space(J); });

    ParsedMarket out{std::move(assets),
                     [&] {
                         try {
                             return MarketInstance(std::move(tree), J, std::move(costs), std::move(sets));
                         } catch (const std::exception& e) {
                             throw MarketFileError(std::string("instance: ") + e.what());
                         }
                     }(),
                     {},
                     {}};

    if (doc.contains("claims")) {
        for (const auto& [name, arr] : doc["claims"].items()) {
            if (!arr.is_array() || arr.size() != N)
                throw MarketFileError("claims." + name + ": need one value per node");
            ScalarProcess c;
            for (const auto& v : arr) c.push_back(parse_number(v, opt, "claims." + name));
            out.claims.emplace(name, std::move(c));
        }
    }
    if (doc.contains("deflators")) {
        for (const auto& [name, obj] : doc["deflators"].items()) {
            const std::string where = "deflators." + name;
            reject_unknown(obj, {"y", "s"}, where);
            NamedDeflator d;
            if (!obj.contains("y") || !obj["y"].is_array() || obj["y"].size() != N)
                throw MarketFileError(where + ".y: need one value per node");
            for (const auto& v : obj["y"]) d.y.push_back(parse_number(v, opt, where + ".y"));
            if (obj.contains("s")) {
                if (!obj["s"].is_array() || obj["s"].size() != N)
                    throw MarketFileError(where + ".s: need one vector per node");
                for (const auto& v : obj["s"])
                    d.s.push_back(parse_vec(v, static_cast<size_t>(J), opt, where + ".s"));
            }
            out.deflators.emplace(name, std::move(d));
        }
    }
    return out;
}

ParsedMarket load_market_file(const std::string& path, LoadOptions opt) {
    std::ifstream in(path);
    if (!in) throw MarketFileError("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    if (opt.base_dir.empty()) {
        const auto slash = path.find_last_of('/');
        if (slash != std::string::npos) opt.base_dir = path.substr(0, slash);
    }
    return load_market_text(buf.str(), opt);
}

std::uint64_t content_digest(const std::string& text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace illiq
