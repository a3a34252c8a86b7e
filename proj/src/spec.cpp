#include "fitzop/spec.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <charconv>
#include <set>

namespace fitzop {
namespace {

// Scans one value string; errors carry the file position of the offending character.
class Cursor {
public:
    Cursor(std::string_view s, int line, int col) : s_(s), line_(line), col_(col) {}

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(line_, col_ + static_cast<int>(pos_), msg);
    }
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool at_end() {
        skip_ws();
        return pos_ >= s_.size();
    }
    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    bool accept(char c) {
        if (peek() != c) return false;
        ++pos_;
        return true;
    }
    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }
    bool accept_word(std::string_view w) {
        skip_ws();
        if (s_.substr(pos_, w.size()) != w) return false;
        const std::size_t end = pos_ + w.size();
        if (end < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '_')) return false;
        pos_ = end;
        return true;
    }
    void expect_end() {
        if (!at_end()) fail("unexpected trailing text");
    }

    double number() {
        skip_ws();
        const std::size_t start = pos_;
        bool neg = false;
        if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) {
            neg = s_[pos_] == '-';
            ++pos_;
        }
        if (s_.substr(pos_, 3) == "inf") {
            pos_ += 3;
            return neg ? -kInf : kInf;
        }
        pos_ = start;
        double v = 0.0;
        const char* first = s_.data() + pos_;
        const char* last = s_.data() + s_.size();
        if (*first == '+') ++first;
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr == first) fail("expected a number");
        pos_ = static_cast<std::size_t>(ptr - s_.data());
        return v;
    }
    double finite_number() {
        const std::size_t at = pos_;
        const double v = number();
        if (!std::isfinite(v)) {
            pos_ = at;
            skip_ws();
            fail("expected a finite number");
        }
        return v;
    }
    Vector vector() {
        Vector out;
        expect('[');
        if (accept(']')) return out;
        do {
            out.push_back(finite_number());
        } while (accept(','));
        expect(']');
        return out;
    }
    std::vector<Vector> vector_list() {
        std::vector<Vector> out;
        expect('[');
        if (accept(']')) return out;
        do {
            out.push_back(vector());
        } while (accept(','));
        expect(']');
        return out;
    }
    std::string identifier() {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        if (pos_ == start) fail("expected an identifier");
        return std::string(s_.substr(start, pos_ - start));
    }

    std::size_t pos() const { return pos_; }

private:
    std::string_view s_;
    std::size_t pos_ = 0;
    int line_;
    int col_;
};

Region region_from(Cursor& c, std::size_t dim) {
    Region out = Region::empty(dim);
    if (c.accept_word("whole")) {
        out = Region::whole(dim);
    } else if (c.accept_word("empty")) {
        out = Region::empty(dim);
    } else if (c.accept_word("halfspace")) {
        Vector normal = c.vector();
        if (normal.size() != dim) c.fail("halfspace normal has the wrong dimension");
        c.expect('<');
        const bool open = !c.accept('=');
        const double offset = c.finite_number();
        if (max_abs(normal) == 0.0) c.fail("halfspace normal must be nonzero");
        out = Region::half_space(std::move(normal), offset, open);
    } else if (c.accept_word("polytope")) {
        auto verts = c.vector_list();
        if (verts.empty()) c.fail("polytope needs at least one vertex");
        for (const auto& v : verts)
            if (v.size() != dim) c.fail("polytope vertex has the wrong dimension");
        out = Region::polytope(std::move(verts));
    } else {
        Box b;
        do {
            const char open_ch = c.peek();
            if (open_ch != '(' && open_ch != '[') c.fail("expected an interval, whole, empty, halfspace or polytope");
            c.accept(open_ch);
            const double lo = c.number();
            c.expect(',');
            const double hi = c.number();
            const char close_ch = c.peek();
            if (close_ch != ')' && close_ch != ']') c.fail("expected ')' or ']'");
            c.accept(close_ch);
            if (lo == kInf || hi == -kInf) c.fail("interval bounds out of order");
            if (lo > hi) c.fail("interval lower bound exceeds upper bound");
            b.lo.push_back(lo == -kInf ? Bound::infinite() : open_ch == '(' ? Bound::open(lo) : Bound::closed(lo));
            b.hi.push_back(hi == kInf ? Bound::infinite() : close_ch == ')' ? Bound::open(hi) : Bound::closed(hi));
        } while (c.accept('x'));
        if (b.lo.size() != dim) c.fail("region has " + std::to_string(b.lo.size()) + " axes, expected " +
                                       std::to_string(dim));
        out = Region::box(std::move(b));
    }
    c.expect_end();
    return out;
}

struct Node {
    std::string key;
    std::string value;
    int line = 0;
    int key_col = 0;
    int value_col = 0;
    std::vector<Node> children;

    Cursor cursor() const { return Cursor(value, line, value_col); }
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line, key_col, msg); }
};

struct RawLine {
    int no;
    int indent;
    std::string key;
    std::string value;
    int value_col;
};

std::vector<RawLine> split_lines(std::string_view text) {
    std::vector<RawLine> out;
    int no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string line(text.substr(start, end - start));
        ++no;
        start = end + 1;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t") == std::string::npos) {
            if (end == text.size()) break;
            continue;
        }
        if (const auto tab = line.find('\t'); tab != std::string::npos)
            throw ParseError(no, static_cast<int>(tab) + 1, "tabs are not allowed");
        const auto indent = line.find_first_not_of(' ');
        const auto colon = line.find(':', indent);
        if (colon == std::string::npos) throw ParseError(no, static_cast<int>(indent) + 1, "expected 'key: value'");
        std::string key = line.substr(indent, colon - indent);
        while (!key.empty() && key.back() == ' ') key.pop_back();
        if (key.empty()) throw ParseError(no, static_cast<int>(indent) + 1, "empty key");
        auto vstart = line.find_first_not_of(' ', colon + 1);
        std::string value = vstart == std::string::npos ? "" : line.substr(vstart);
        while (!value.empty() && value.back() == ' ') value.pop_back();
        out.push_back({no, static_cast<int>(indent), std::move(key), std::move(value),
                       vstart == std::string::npos ? 0 : static_cast<int>(vstart) + 1});
        if (end == text.size()) break;
    }
    return out;
}

std::vector<Node> build_block(const std::vector<RawLine>& lines, std::size_t& i, int indent) {
    std::vector<Node> out;
    std::set<std::string> seen;
    while (i < lines.size() && lines[i].indent >= indent) {
        const RawLine& l = lines[i];
        if (l.indent > indent) throw ParseError(l.no, l.indent + 1, "unexpected indentation");
        Node n{l.key, l.value, l.no, l.indent + 1, l.value_col, {}};
        if (!seen.insert(l.key).second) n.fail("duplicate key '" + l.key + "'");
        ++i;
        if (i < lines.size() && lines[i].indent > indent) {
            if (!n.value.empty()) throw ParseError(lines[i].no, lines[i].indent + 1, "unexpected indentation");
            n.children = build_block(lines, i, lines[i].indent);
        }
        out.push_back(std::move(n));
    }
    return out;
}

void require_scalar(const Node& n) {
    if (!n.children.empty()) n.fail("'" + n.key + "' takes a value, not a block");
    if (n.value.empty()) n.fail("'" + n.key + "' needs a value");
}

void require_block(const Node& n) {
    if (!n.value.empty()) throw ParseError(n.line, n.value_col, "'" + n.key + "' opens a block; put entries below it");
    if (n.children.empty()) n.fail("'" + n.key + "' block is empty");
}

double number_of(const Node& n) {
    require_scalar(n);
    Cursor c = n.cursor();
    const double v = c.finite_number();
    c.expect_end();
    return v;
}

std::size_t count_of(const Node& n) {
    const double v = number_of(n);
    if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v))) n.fail("'" + n.key + "' must be a whole number");
    return static_cast<std::size_t>(v);
}

// `[1, 2]`, or a bare number when dim = 1.
Vector vector_of(const Node& n, std::size_t dim) {
    require_scalar(n);
    Cursor c = n.cursor();
    Vector v = c.peek() == '[' ? c.vector() : Vector{c.finite_number()};
    c.expect_end();
    if (v.size() != dim) n.fail("'" + n.key + "' must have " + std::to_string(dim) + " entries");
    return v;
}

Region region_of(const Node& n, std::size_t dim) {
    require_scalar(n);
    Cursor c = n.cursor();
    return region_from(c, dim);
}

OperatorSpec operator_of(const Node& block, std::size_t dim) {
    require_block(block);
    OperatorSpec spec;
    spec.dim = dim;
    const Node* kind = nullptr;
    for (const auto& n : block.children)
        if (n.key == "kind") kind = &n;
    if (!kind) block.fail("operator block needs 'kind'");
    require_scalar(*kind);
    spec.kind = kind->value;
    static const std::set<std::string> kinds = {"finite_graph", "flat",        "normal_cone_box",
                                                "abs_subdiff",  "point_complement", "linear",
                                                "restriction",  "sum_normal_cone",  "pair_sum"};
    if (!kinds.count(spec.kind)) throw ParseError(kind->line, kind->value_col, "unknown operator kind '" + spec.kind + "'");

    std::optional<OperatorSpec> base, left, right;
    for (const auto& n : block.children) {
        if (n.key == "kind") continue;
        if (n.key == "points") {
            require_scalar(n);
            Cursor c = n.cursor();
            for (const auto& row : c.vector_list()) {
                if (row.size() != 2 * dim) n.fail("each point needs " + std::to_string(2 * dim) + " numbers (x then x*)");
                spec.points.emplace_back(Vector(row.begin(), row.begin() + static_cast<long>(dim)),
                                         Vector(row.begin() + static_cast<long>(dim), row.end()));
            }
            c.expect_end();
        } else if (n.key == "region") {
            spec.region = region_of(n, dim);
        } else if (n.key == "box") {
            spec.box = region_of(n, dim);
            if (!spec.box->as_box()) n.fail("'box' must be a box literal");
        } else if (n.key == "wstar") {
            spec.wstar = vector_of(n, dim);
        } else if (n.key == "scale") {
            spec.scale = number_of(n);
        } else if (n.key == "point") {
            spec.point = vector_of(n, dim);
        } else if (n.key == "matrix") {
            require_scalar(n);
            Cursor c = n.cursor();
            const auto rows = c.vector_list();
            c.expect_end();
            if (rows.size() != dim) n.fail("matrix must have " + std::to_string(dim) + " rows");
            for (const auto& r : rows) {
                if (r.size() != dim) n.fail("matrix must have " + std::to_string(dim) + " columns");
                spec.matrix.insert(spec.matrix.end(), r.begin(), r.end());
            }
        } else if (n.key == "base") {
            base = operator_of(n, dim);
        } else if (n.key == "left") {
            left = operator_of(n, dim);
        } else if (n.key == "right") {
            right = operator_of(n, dim);
        } else {
            n.fail("unknown operator key '" + n.key + "'");
        }
    }

    auto need = [&](bool ok, const char* what) {
        if (!ok) block.fail(spec.kind + " needs '" + what + "'");
    };
    auto forbid_others = [&](std::initializer_list<std::string_view> allowed) {
        for (const auto& n : block.children) {
            if (n.key == "kind") continue;
            if (std::find(allowed.begin(), allowed.end(), n.key) == allowed.end())
                n.fail("'" + n.key + "' does not apply to " + spec.kind);
        }
    };
    if (spec.kind == "finite_graph") {
        forbid_others({"points"});
        need(!spec.points.empty(), "points");
    } else if (spec.kind == "flat") {
        forbid_others({"region", "wstar"});
        need(spec.region.has_value(), "region");
    } else if (spec.kind == "normal_cone_box") {
        forbid_others({"box"});
        need(spec.box.has_value(), "box");
    } else if (spec.kind == "abs_subdiff") {
        forbid_others({"scale"});
    } else if (spec.kind == "point_complement") {
        forbid_others({"point"});
    } else if (spec.kind == "linear") {
        forbid_others({"matrix"});
        need(!spec.matrix.empty(), "matrix");
    } else if (spec.kind == "restriction") {
        forbid_others({"region", "base"});
        need(spec.region.has_value(), "region");
        need(base.has_value(), "base");
    } else if (spec.kind == "sum_normal_cone") {
        forbid_others({"box", "base"});
        need(spec.box.has_value(), "box");
        need(base.has_value(), "base");
    } else if (spec.kind == "pair_sum") {
        forbid_others({"left", "right"});
        need(left.has_value(), "left");
        need(right.has_value(), "right");
    }
    if (base) spec.children.push_back(std::move(*base));
    if (left) spec.children.push_back(std::move(*left));
    if (right) spec.children.push_back(std::move(*right));
    return spec;
}

}  // namespace

const std::vector<std::string>& known_properties() {
    static const std::vector<std::string> props = {
        "monotone",          "vni",           "ni",
        "locates",           "identifies",    "v_representable",
        "maximal",           "condition_c",   "unique_extension",
        "family_vni",        "family_locates", "family_identifies",
        "family_v_representable", "family_condition_c", "low_representable",
    };
    return props;
}

Region parse_region(std::string_view text, std::size_t dim) {
    Cursor c(text, 1, 1);
    return region_from(c, dim);
}

ParsedSpec parse_spec(std::string_view text) {
    const auto lines = split_lines(text);
    if (lines.empty()) throw ParseError(1, 1, "empty spec");
    std::size_t i = 0;
    if (lines[0].indent != 0) throw ParseError(lines[0].no, lines[0].indent + 1, "unexpected indentation");
    const std::vector<Node> top = build_block(lines, i, 0);

    RunConfig cfg;
    const Node* dim_node = nullptr;
    for (const auto& n : top)
        if (n.key == "dimension") dim_node = &n;
    if (dim_node) {
        cfg.dim = count_of(*dim_node);
        if (cfg.dim < 1 || cfg.dim > 3) dim_node->fail("dimension must be 1, 2 or 3");
    }
    cfg.region = Region::whole(cfg.dim);
    cfg.ambient = Region::whole(cfg.dim);

    const Node* op_node = nullptr;
    for (const auto& n : top) {
        if (n.key == "dimension") continue;
        if (n.key == "operator") {
            op_node = &n;
            cfg.op = operator_of(n, cfg.dim);
        } else if (n.key == "region") {
            cfg.region = region_of(n, cfg.dim);
        } else if (n.key == "locate_target") {
            cfg.locate_target = region_of(n, cfg.dim);
        } else if (n.key == "ambient") {
            cfg.ambient = region_of(n, cfg.dim);
        } else if (n.key == "grid") {
            require_block(n);
            for (const auto& c : n.children) {
                if (c.key == "resolution") cfg.grid.resolution = count_of(c);
                else if (c.key == "dual_resolution") cfg.grid.dual_resolution = count_of(c);
                else if (c.key == "dual_bound") cfg.grid.dual_bound = number_of(c);
                else if (c.key == "ambient_bound") cfg.grid.ambient_bound = number_of(c);
                else c.fail("unknown grid key '" + c.key + "'");
            }
            try {
                cfg.grid.validate();
            } catch (const Error& e) {
                n.fail(e.what());
            }
        } else if (n.key == "tolerance") {
            require_block(n);
            for (const auto& c : n.children) {
                if (c.key == "eps_eq") cfg.tol.eps_eq = number_of(c);
                else if (c.key == "eps_strict") cfg.tol.eps_strict = number_of(c);
                else if (c.key == "delta_dom") cfg.tol.delta_dom = number_of(c);
                else c.fail("unknown tolerance key '" + c.key + "'");
            }
            try {
                cfg.tol.validate();
            } catch (const Error& e) {
                n.fail(e.what());
            }
        } else if (n.key == "properties") {
            require_scalar(n);
            Cursor c = n.cursor();
            c.expect('[');
            if (!c.accept(']')) {
                do {
                    const std::size_t at = c.pos();
                    std::string p = c.identifier();
                    const auto& known = known_properties();
                    if (std::find(known.begin(), known.end(), p) == known.end())
                        throw ParseError(n.line, n.value_col + static_cast<int>(at), "unknown property '" + p + "'");
                    cfg.properties.push_back(std::move(p));
                } while (c.accept(','));
                c.expect(']');
            }
            c.expect_end();
        } else if (n.key == "family") {
            require_block(n);
            for (const auto& c : n.children) {
                if (c.key == "rule") {
                    require_scalar(c);
                    if (c.value != "dyadic" && c.value != "explicit")
                        throw ParseError(c.line, c.value_col, "family rule must be dyadic or explicit");
                    cfg.family.rule = c.value;
                } else if (c.key == "scales") {
                    cfg.family.scales = count_of(c);
                    if (cfg.family.scales < 1 || cfg.family.scales > 6) c.fail("scales must be between 1 and 6");
                } else if (c.key == "regions") {
                    require_scalar(c);
                    // Region literals separated by ';'.
                    std::size_t start = 0;
                    while (start <= c.value.size()) {
                        std::size_t end = c.value.find(';', start);
                        if (end == std::string::npos) end = c.value.size();
                        Cursor rc(std::string_view(c.value).substr(start, end - start), c.line,
                                  c.value_col + static_cast<int>(start));
                        cfg.family.regions.push_back(region_from(rc, cfg.dim));
                        start = end + 1;
                    }
                } else {
                    c.fail("unknown family key '" + c.key + "'");
                }
            }
            if (cfg.family.rule == "explicit" && cfg.family.regions.empty()) n.fail("explicit family needs 'regions'");
        } else {
            n.fail("unknown key '" + n.key + "'");
        }
    }
    if (!op_node) throw ParseError(lines.back().no, 1, "missing 'operator' block");

    ParsedSpec out{std::move(cfg), nullptr};
    try {
        out.op = build_operator(out.config.op);
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        op_node->fail(e.what());
    }
    return out;
}

}  // namespace fitzop
