#include "fracpicard/rhs_expr.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <sstream>

#include "fracpicard/errors.hpp"

namespace fracpicard {
namespace {

struct FunctionName {
    std::string_view name;
    Function id;
};

constexpr std::array<FunctionName, 7> kFunctions = {{
    {"sin", Function::Sin},
    {"cos", Function::Cos},
    {"exp", Function::Exp},
    {"log", Function::Log},
    {"abs", Function::Abs},
    {"sqrt", Function::Sqrt},
    {"erfc", Function::Erfc},
}};

std::string_view function_name(Function f) {
    for (const auto& entry : kFunctions) {
        if (entry.id == f) return entry.name;
    }
    return "?";
}

std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::shared_ptr<ExprNode> make_node(NodeKind kind, std::size_t pos, ExprNodePtr lhs = nullptr,
                                    ExprNodePtr rhs = nullptr) {
    auto node = std::make_shared<ExprNode>();
    node->kind = kind;
    node->position = pos;
    node->lhs = std::move(lhs);
    node->rhs = std::move(rhs);
    return node;
}

class Parser {
public:
    Parser(std::string_view text, std::size_t m, const ParseOptions& options)
        : text_(text), m_(m), options_(options) {}

    ExprNodePtr parse() {
        skip_ws();
        if (pos_ >= text_.size()) {
            throw ParseError("empty expression", pos_);
        }
        auto root = expr();
        skip_ws();
        if (pos_ < text_.size()) {
            throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
        }
        return root;
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            if (pos_ >= text_.size()) {
                throw ParseError(std::string("expected '") + c + "' but reached end of input", pos_);
            }
            throw ParseError(std::string("expected '") + c + "'", pos_);
        }
    }

    ExprNodePtr expr() {
        auto lhs = term();
        for (;;) {
            skip_ws();
            const std::size_t at = pos_;
            if (accept('+')) {
                lhs = make_node(NodeKind::Add, at, lhs, term());
            } else if (accept('-')) {
                lhs = make_node(NodeKind::Sub, at, lhs, term());
            } else {
                return lhs;
            }
        }
    }

    ExprNodePtr term() {
        auto lhs = unary();
        for (;;) {
            skip_ws();
            const std::size_t at = pos_;
            if (accept('*')) {
                lhs = make_node(NodeKind::Mul, at, lhs, unary());
            } else if (accept('/')) {
                lhs = make_node(NodeKind::Div, at, lhs, unary());
            } else {
                return lhs;
            }
        }
    }

    ExprNodePtr unary() {
        skip_ws();
        const std::size_t at = pos_;
        if (accept('-')) return make_node(NodeKind::Neg, at, unary());
        if (accept('+')) return unary();
        return power();
    }

    ExprNodePtr power() {
        auto base = primary();
        skip_ws();
        const std::size_t at = pos_;
        if (accept('^')) {
            return make_node(NodeKind::Pow, at, base, unary());
        }
        return base;
    }

    ExprNodePtr primary() {
        skip_ws();
        if (pos_ >= text_.size()) {
            throw ParseError("unexpected end of input", pos_);
        }
        const std::size_t at = pos_;
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            auto inner = expr();
            expect(')');
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return number();
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            return identifier();
        }
        throw ParseError(std::string("unexpected '") + c + "'", at);
    }

    ExprNodePtr number() {
        const std::size_t at = pos_;
        std::size_t end = pos_;
        auto digits = [&] {
            const std::size_t start = end;
            while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
            return end - start;
        };
        std::size_t count = digits();
        if (end < text_.size() && text_[end] == '.') {
            ++end;
            count += digits();
        }
        if (count == 0) {
            throw ParseError("malformed number", at);
        }
        if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
            std::size_t save = end;
            ++end;
            if (end < text_.size() && (text_[end] == '+' || text_[end] == '-')) ++end;
            if (digits() == 0) {
                end = save;
                throw ParseError("malformed exponent", save);
            }
        }
        const std::string literal(text_.substr(at, end - at));
        errno = 0;
        const double value = std::strtod(literal.c_str(), nullptr);
        if (errno == ERANGE && std::isinf(value)) {
            throw ParseError("numeric literal out of range", at);
        }
        pos_ = end;
        auto node = make_node(NodeKind::Number, at);
        node->number = value;
        return node;
    }

    ExprNodePtr identifier() {
        const std::size_t at = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
        }
        const std::string_view name = text_.substr(at, pos_ - at);

        for (const auto& entry : kFunctions) {
            if (entry.name == name) return call(entry.id, name, at);
        }

        std::shared_ptr<ExprNode> node;
        if (name == "t") {
            node = make_node(NodeKind::Time, at);
        } else if (name == "y" && options_.y_alias) {
            node = make_node(NodeKind::Var, at);
            node->var_index = *options_.y_alias;
        } else if (auto idx = z_index(name)) {
            node = make_node(NodeKind::Var, at);
            node->var_index = *idx;
        } else {
            throw ParseError("unknown identifier '" + std::string(name) + "'", at);
        }
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == '(') {
            throw ParseError("'" + std::string(name) + "' is not a function", at);
        }
        return node;
    }

    std::optional<std::size_t> z_index(std::string_view name) const {
        if (name.size() < 2 || name[0] != 'z') return std::nullopt;
        std::size_t k = 0;
        for (std::size_t i = 1; i < name.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(name[i]))) return std::nullopt;
            k = k * 10 + static_cast<std::size_t>(name[i] - '0');
            if (k > 1'000'000) return std::nullopt;
        }
        if (name[1] == '0' || k < 1 || k > m_) return std::nullopt;
        return k - 1;
    }

    ExprNodePtr call(Function fn, std::string_view name, std::size_t at) {
        skip_ws();
        if (!accept('(')) {
            throw ParseError("function '" + std::string(name) + "' requires an argument list", at);
        }
        skip_ws();
        if (accept(')')) {
            throw ParseError("function '" + std::string(name) + "' takes 1 argument, got 0", at);
        }
        auto arg = expr();
        std::size_t extra = 0;
        while (accept(',')) {
            expr();
            ++extra;
        }
        if (extra > 0) {
            throw ParseError("function '" + std::string(name) + "' takes 1 argument, got " +
                                 std::to_string(extra + 1),
                             at);
        }
        expect(')');
        auto node = make_node(NodeKind::Call, at, std::move(arg));
        node->function = fn;
        return node;
    }

    std::string_view text_;
    std::size_t m_;
    const ParseOptions& options_;
    std::size_t pos_ = 0;
};

std::string_view binary_symbol(NodeKind kind) {
    switch (kind) {
        case NodeKind::Add: return "+";
        case NodeKind::Sub: return "-";
        case NodeKind::Mul: return "*";
        case NodeKind::Div: return "/";
        case NodeKind::Pow: return "^";
        default: return "?";
    }
}

std::string_view kind_name(NodeKind kind) {
    switch (kind) {
        case NodeKind::Neg: return "Neg";
        case NodeKind::Add: return "Add";
        case NodeKind::Sub: return "Sub";
        case NodeKind::Mul: return "Mul";
        case NodeKind::Div: return "Div";
        case NodeKind::Pow: return "Pow";
        default: return "?";
    }
}

void print_infix(const ExprNode& n, std::ostream& out) {
    switch (n.kind) {
        case NodeKind::Number: out << format_number(n.number); return;
        case NodeKind::Time: out << 't'; return;
        case NodeKind::Var: out << 'z' << (n.var_index + 1); return;
        case NodeKind::Neg:
            out << "(-";
            print_infix(*n.lhs, out);
            out << ')';
            return;
        case NodeKind::Call:
            out << function_name(n.function) << '(';
            print_infix(*n.lhs, out);
            out << ')';
            return;
        default:
            out << '(';
            print_infix(*n.lhs, out);
            out << ' ' << binary_symbol(n.kind) << ' ';
            print_infix(*n.rhs, out);
            out << ')';
    }
}

void print_sexpr(const ExprNode& n, std::ostream& out) {
    switch (n.kind) {
        case NodeKind::Number: out << format_number(n.number); return;
        case NodeKind::Time: out << 't'; return;
        case NodeKind::Var: out << 'z' << (n.var_index + 1); return;
        case NodeKind::Call:
            out << function_name(n.function) << '(';
            print_sexpr(*n.lhs, out);
            out << ')';
            return;
        case NodeKind::Neg:
            out << "Neg(";
            print_sexpr(*n.lhs, out);
            out << ')';
            return;
        default:
            out << kind_name(n.kind) << '(';
            print_sexpr(*n.lhs, out);
            out << ',';
            print_sexpr(*n.rhs, out);
            out << ')';
    }
}

bool same_tree(const ExprNode& a, const ExprNode& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case NodeKind::Number: return a.number == b.number;
        case NodeKind::Time: return true;
        case NodeKind::Var: return a.var_index == b.var_index;
        case NodeKind::Neg: return same_tree(*a.lhs, *b.lhs);
        case NodeKind::Call: return a.function == b.function && same_tree(*a.lhs, *b.lhs);
        default: return same_tree(*a.lhs, *b.lhs) && same_tree(*a.rhs, *b.rhs);
    }
}

bool references_state(const ExprNode& n) {
    switch (n.kind) {
        case NodeKind::Var: return true;
        case NodeKind::Number:
        case NodeKind::Time: return false;
        case NodeKind::Neg:
        case NodeKind::Call: return references_state(*n.lhs);
        default: return references_state(*n.lhs) || references_state(*n.rhs);
    }
}

double eval_node(const ExprNode& n, double t, std::span<const double> z) {
    switch (n.kind) {
        case NodeKind::Number: return n.number;
        case NodeKind::Time: return t;
        case NodeKind::Var: return z[n.var_index];
        case NodeKind::Neg: return -eval_node(*n.lhs, t, z);
        case NodeKind::Add: return eval_node(*n.lhs, t, z) + eval_node(*n.rhs, t, z);
        case NodeKind::Sub: return eval_node(*n.lhs, t, z) - eval_node(*n.rhs, t, z);
        case NodeKind::Mul: return eval_node(*n.lhs, t, z) * eval_node(*n.rhs, t, z);
        case NodeKind::Div: {
            const double num = eval_node(*n.lhs, t, z);
            const double den = eval_node(*n.rhs, t, z);
            if (den == 0.0) throw EvalError("division by zero", n.position);
            return num / den;
        }
        case NodeKind::Pow: {
            const double base = eval_node(*n.lhs, t, z);
            const double expo = eval_node(*n.rhs, t, z);
            if (base == 0.0 && expo < 0.0) throw EvalError("zero raised to a negative power", n.position);
            if (base < 0.0 && expo != std::floor(expo)) {
                throw EvalError("negative base raised to a non-integer power", n.position);
            }
            return std::pow(base, expo);
        }
        case NodeKind::Call: {
            const double x = eval_node(*n.lhs, t, z);
            switch (n.function) {
                case Function::Sin: return std::sin(x);
                case Function::Cos: return std::cos(x);
                case Function::Exp: return std::exp(x);
                case Function::Log:
                    if (!(x > 0.0)) throw EvalError("log of a non-positive number", n.position);
                    return std::log(x);
                case Function::Abs: return std::abs(x);
                case Function::Sqrt:
                    if (x < 0.0) throw EvalError("sqrt of a negative number", n.position);
                    return std::sqrt(x);
                case Function::Erfc: return std::erfc(x);
            }
        }
    }
    return 0.0;
}

}  // namespace

std::string RhsExpr::to_string() const {
    std::ostringstream out;
    print_infix(*root_, out);
    return out.str();
}

std::string RhsExpr::to_sexpr() const {
    std::ostringstream out;
    print_sexpr(*root_, out);
    return out.str();
}

bool RhsExpr::is_state_free() const { return !references_state(*root_); }

bool operator==(const RhsExpr& a, const RhsExpr& b) {
    return a.arity_ == b.arity_ && same_tree(*a.root_, *b.root_);
}

RhsExpr parse_rhs(std::string_view text, std::size_t m, const ParseOptions& options) {
    if (options.y_alias && *options.y_alias >= m) {
        throw ParseError("y alias index exceeds the number of inner derivatives", 0);
    }
    Parser parser(text, m, options);
    return RhsExpr(parser.parse(), m);
}

double eval_rhs(const RhsExpr& expr, double t, std::span<const double> z) {
    if (z.size() != expr.arity()) {
        throw EvalError("expected " + std::to_string(expr.arity()) + " state values, got " +
                            std::to_string(z.size()),
                        0);
    }
    return eval_node(expr.root(), t, z);
}

double estimate_lipschitz(const RhsExpr& expr, Interval t_range, std::span<const Interval> z_box,
                          std::size_t samples, std::uint64_t seed) {
    const std::size_t m = expr.arity();
    if (z_box.size() != m) {
        throw DomainError("estimate_lipschitz: box dimension does not match the expression arity");
    }
    for (const auto& iv : z_box) {
        if (!(iv.hi >= iv.lo) || !std::isfinite(iv.lo) || !std::isfinite(iv.hi)) {
            throw DomainError("estimate_lipschitz: box must be bounded");
        }
    }
    if (m == 0 || samples == 0) return 0.0;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto draw = [&](Interval iv) { return iv.lo + (iv.hi - iv.lo) * unit(rng); };

    std::vector<double> a(m);
    std::vector<double> b(m);
    double best = 0.0;
    auto update = [&](double t) {
        double dist = 0.0;
        for (std::size_t k = 0; k < m; ++k) dist += std::abs(a[k] - b[k]);
        if (dist == 0.0) return;
        const double diff = std::abs(eval_rhs(expr, t, a) - eval_rhs(expr, t, b));
        best = std::max(best, diff / dist);
    };

    constexpr std::array<double, 4> kAxisSteps = {1.0, 1e-1, 1e-3, 1e-6};
    for (std::size_t s = 0; s < samples; ++s) {
        const double t = draw(t_range);
        for (std::size_t k = 0; k < m; ++k) {
            a[k] = draw(z_box[k]);
            b[k] = draw(z_box[k]);
        }
        update(t);

        // Axis-aligned pairs attain the l1-dual norm of the local gradient.
        const std::size_t axis = s % m;
        const double width = z_box[axis].hi - z_box[axis].lo;
        if (width == 0.0) continue;
        b = a;
        for (double frac : kAxisSteps) {
            const double step = frac * width * unit(rng);
            b[axis] = a[axis] + step <= z_box[axis].hi ? a[axis] + step
                                                       : std::max(z_box[axis].lo, a[axis] - step);
            update(t);
        }
    }
    return best;
}

}  // namespace fracpicard
