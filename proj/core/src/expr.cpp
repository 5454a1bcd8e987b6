#include "spvide/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>

namespace spvide::expr {

const char* name(Var v) {
    switch (v) {
        case Var::T: return "t";
        case Var::S: return "s";
        case Var::X: return "x";
    }
    return "?";
}

const char* name(BinOp op) {
    switch (op) {
        case BinOp::Add: return "+";
        case BinOp::Sub: return "-";
        case BinOp::Mul: return "*";
        case BinOp::Div: return "/";
        case BinOp::Pow: return "^";
    }
    return "?";
}

const char* name(Func f) {
    switch (f) {
        case Func::Sin: return "sin";
        case Func::Cos: return "cos";
        case Func::Exp: return "exp";
        case Func::Ln: return "ln";
        case Func::Sqrt: return "sqrt";
        case Func::Abs: return "abs";
    }
    return "?";
}

namespace {

struct Token {
    enum class Type { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };
    Type type = Type::End;
    double number = 0.0;
    std::string_view text;
    std::uint32_t offset = 0;
};

const char* describe(Token::Type t) {
    switch (t) {
        case Token::Type::Number: return "number";
        case Token::Type::Ident: return "identifier";
        case Token::Type::Plus: return "'+'";
        case Token::Type::Minus: return "'-'";
        case Token::Type::Star: return "'*'";
        case Token::Type::Slash: return "'/'";
        case Token::Type::Caret: return "'^'";
        case Token::Type::LParen: return "'('";
        case Token::Type::RParen: return "')'";
        case Token::Type::End: return "end of input";
    }
    return "?";
}

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        Token tok;
        tok.offset = static_cast<std::uint32_t>(pos_);
        if (pos_ >= src_.size()) return tok;

        const char c = src_[pos_];
        switch (c) {
            case '+': ++pos_; tok.type = Token::Type::Plus; return tok;
            case '-': ++pos_; tok.type = Token::Type::Minus; return tok;
            case '*': ++pos_; tok.type = Token::Type::Star; return tok;
            case '/': ++pos_; tok.type = Token::Type::Slash; return tok;
            case '^': ++pos_; tok.type = Token::Type::Caret; return tok;
            case '(': ++pos_; tok.type = Token::Type::LParen; return tok;
            case ')': ++pos_; tok.type = Token::Type::RParen; return tok;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return lex_number(tok);
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return lex_ident(tok);
        throw ParseError(pos_, std::string("unexpected character '") + c + "'");
    }

private:
    Token lex_number(Token tok) {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t mark = pos_;
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            } else {
                pos_ = mark;  // 'e' starts an identifier, not an exponent
            }
        }
        tok.type = Token::Type::Number;
        tok.text = src_.substr(start, pos_ - start);
        auto [ptr, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), tok.number);
        if (ec != std::errc() || ptr != tok.text.data() + tok.text.size())
            throw ParseError(start, "malformed number literal '" + std::string(tok.text) + "'");
        return tok;
    }

    Token lex_ident(Token tok) {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            ++pos_;
        tok.type = Token::Type::Ident;
        tok.text = src_.substr(start, pos_ - start);
        return tok;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

// Binding powers. '^' out-binds unary minus on its base, unary minus
// out-binds '*' and '/'.
constexpr int kAddBp = 10;
constexpr int kMulBp = 20;
constexpr int kNegBp = 30;
constexpr int kPowBp = 40;

class Parser {
public:
    Parser(std::string_view src, std::vector<Node>& nodes) : lexer_(src), nodes_(nodes) {
        advance();
    }

    std::int32_t parse_toplevel() {
        std::int32_t root = parse_expression(0);
        if (cur_.type != Token::Type::End)
            throw ParseError(cur_.offset, std::string("expected operator or end of input, found ") +
                                              describe(cur_.type));
        return root;
    }

private:
    void advance() { cur_ = lexer_.next(); }

    Token expect(Token::Type type) {
        if (cur_.type != type)
            throw ParseError(cur_.offset, std::string("expected ") + describe(type) + ", found " +
                                              describe(cur_.type));
        Token tok = cur_;
        advance();
        return tok;
    }

    static int left_binding_power(Token::Type t) {
        switch (t) {
            case Token::Type::Plus:
            case Token::Type::Minus: return kAddBp;
            case Token::Type::Star:
            case Token::Type::Slash: return kMulBp;
            case Token::Type::Caret: return kPowBp;
            default: return 0;
        }
    }

    std::int32_t parse_expression(int rbp) {
        std::int32_t left = parse_prefix();
        while (left_binding_power(cur_.type) > rbp) {
            Token op = cur_;
            advance();
            left = parse_infix(op, left);
        }
        return left;
    }

    std::int32_t parse_prefix() {
        Token tok = cur_;
        switch (tok.type) {
            case Token::Type::Number: {
                advance();
                Node n;
                n.kind = Node::Kind::Constant;
                n.value = tok.number;
                n.offset = tok.offset;
                return push(n);
            }
            case Token::Type::Ident:
                advance();
                return parse_identifier(tok);
            case Token::Type::Minus: {
                advance();
                std::int32_t operand = parse_expression(kNegBp);
                Node n;
                n.kind = Node::Kind::Negate;
                n.a = operand;
                n.offset = tok.offset;
                return push(n);
            }
            case Token::Type::LParen: {
                advance();
                std::int32_t inner = parse_expression(0);
                expect(Token::Type::RParen);
                return inner;
            }
            default:
                throw ParseError(tok.offset,
                                 std::string("expected expression, found ") + describe(tok.type));
        }
    }

    std::int32_t parse_identifier(const Token& tok) {
        static constexpr std::array<std::pair<std::string_view, Func>, 6> kFuncs = {{
            {"sin", Func::Sin},
            {"cos", Func::Cos},
            {"exp", Func::Exp},
            {"ln", Func::Ln},
            {"sqrt", Func::Sqrt},
            {"abs", Func::Abs},
        }};
        for (const auto& [fname, f] : kFuncs) {
            if (tok.text == fname) {
                expect(Token::Type::LParen);
                std::int32_t arg = parse_expression(0);
                expect(Token::Type::RParen);
                Node n;
                n.kind = Node::Kind::Call;
                n.func = f;
                n.a = arg;
                n.offset = tok.offset;
                return push(n);
            }
        }
        Node n;
        n.kind = Node::Kind::Variable;
        n.offset = tok.offset;
        if (tok.text == "t") n.var = Var::T;
        else if (tok.text == "s") n.var = Var::S;
        else if (tok.text == "x") n.var = Var::X;
        else throw UnknownIdentifier(tok.offset, std::string(tok.text));
        return push(n);
    }

    std::int32_t parse_infix(const Token& op, std::int32_t left) {
        Node n;
        n.kind = Node::Kind::Binary;
        n.offset = op.offset;
        n.a = left;
        switch (op.type) {
            case Token::Type::Plus: n.op = BinOp::Add; n.b = parse_expression(kAddBp); break;
            case Token::Type::Minus: n.op = BinOp::Sub; n.b = parse_expression(kAddBp); break;
            case Token::Type::Star: n.op = BinOp::Mul; n.b = parse_expression(kMulBp); break;
            case Token::Type::Slash: n.op = BinOp::Div; n.b = parse_expression(kMulBp); break;
            // right-associative: parse the exponent at one power below
            case Token::Type::Caret: n.op = BinOp::Pow; n.b = parse_expression(kPowBp - 1); break;
            default: throw ParseError(op.offset, "internal: not an infix operator");
        }
        return push(n);
    }

    std::int32_t push(const Node& n) {
        nodes_.push_back(n);
        return static_cast<std::int32_t>(nodes_.size() - 1);
    }

    Lexer lexer_;
    Token cur_;
    std::vector<Node>& nodes_;
};

std::string format_value(double v) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

int precedence(const Node& n) {
    switch (n.kind) {
        case Node::Kind::Binary:
            switch (n.op) {
                case BinOp::Add:
                case BinOp::Sub: return kAddBp;
                case BinOp::Mul:
                case BinOp::Div: return kMulBp;
                case BinOp::Pow: return kPowBp;
            }
            return 0;
        case Node::Kind::Negate: return kNegBp;
        default: return 100;
    }
}

}  // namespace

Expression Expression::parse(std::string_view source) {
    if (source.empty()) throw ParseError(0, "empty expression");
    Expression e;
    e.nodes_.clear();
    Parser parser(source, e.nodes_);
    e.root_ = parser.parse_toplevel();
    return e;
}

double Expression::eval(const Bindings& bindings) const {
    return eval_node(root_, bindings);
}

double Expression::eval_node(std::int32_t index, const Bindings& b) const {
    const Node& n = nodes_[static_cast<std::size_t>(index)];
    switch (n.kind) {
        case Node::Kind::Constant:
            return n.value;
        case Node::Kind::Variable: {
            const std::optional<double>& v = n.var == Var::T ? b.t : n.var == Var::S ? b.s : b.x;
            if (!v)
                throw EvalError(n.offset,
                                std::string("missing binding for variable '") + name(n.var) + "'");
            return *v;
        }
        case Node::Kind::Negate:
            return -eval_node(n.a, b);
        case Node::Kind::Binary: {
            const double l = eval_node(n.a, b);
            const double r = eval_node(n.b, b);
            switch (n.op) {
                case BinOp::Add: return l + r;
                case BinOp::Sub: return l - r;
                case BinOp::Mul: return l * r;
                case BinOp::Div:
                    if (r == 0.0) throw EvalError(n.offset, "division by zero");
                    return l / r;
                case BinOp::Pow: {
                    const double v = std::pow(l, r);
                    if (std::isnan(v))
                        throw EvalError(n.offset, "pow domain error (" + format_value(l) + " ^ " +
                                                      format_value(r) + ")");
                    return v;
                }
            }
            return 0.0;
        }
        case Node::Kind::Call: {
            const double a = eval_node(n.a, b);
            switch (n.func) {
                case Func::Sin: return std::sin(a);
                case Func::Cos: return std::cos(a);
                case Func::Exp: return std::exp(a);
                case Func::Ln:
                    if (!(a > 0.0))
                        throw EvalError(n.offset, "ln of non-positive value " + format_value(a));
                    return std::log(a);
                case Func::Sqrt:
                    if (a < 0.0)
                        throw EvalError(n.offset, "sqrt of negative value " + format_value(a));
                    return std::sqrt(a);
                case Func::Abs: return std::fabs(a);
            }
            return 0.0;
        }
    }
    return 0.0;
}

namespace {

void print_node(const std::vector<Node>& nodes, std::int32_t index, std::string& out);

void print_child(const std::vector<Node>& nodes, std::int32_t index, bool parens, std::string& out) {
    if (parens) {
        out += '(';
        print_node(nodes, index, out);
        out += ')';
    } else {
        print_node(nodes, index, out);
    }
}

void print_node(const std::vector<Node>& nodes, std::int32_t index, std::string& out) {
    const Node& n = nodes[static_cast<std::size_t>(index)];
    switch (n.kind) {
        case Node::Kind::Constant:
            out += format_value(n.value);
            return;
        case Node::Kind::Variable:
            out += name(n.var);
            return;
        case Node::Kind::Negate: {
            out += '-';
            print_child(nodes, n.a, precedence(nodes[n.a]) < kNegBp, out);
            return;
        }
        case Node::Kind::Binary: {
            const int prec = precedence(n);
            bool wrap_lhs, wrap_rhs;
            if (n.op == BinOp::Pow) {  // right-associative
                wrap_lhs = precedence(nodes[n.a]) <= prec;
                wrap_rhs = precedence(nodes[n.b]) < prec;
            } else {  // left-associative
                wrap_lhs = precedence(nodes[n.a]) < prec;
                wrap_rhs = precedence(nodes[n.b]) <= prec;
            }
            print_child(nodes, n.a, wrap_lhs, out);
            out += name(n.op);
            print_child(nodes, n.b, wrap_rhs, out);
            return;
        }
        case Node::Kind::Call:
            out += name(n.func);
            out += '(';
            print_node(nodes, n.a, out);
            out += ')';
            return;
    }
}

bool same_node(const std::vector<Node>& an, std::int32_t ai, const std::vector<Node>& bn,
               std::int32_t bi) {
    const Node& a = an[static_cast<std::size_t>(ai)];
    const Node& b = bn[static_cast<std::size_t>(bi)];
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Node::Kind::Constant: return a.value == b.value;
        case Node::Kind::Variable: return a.var == b.var;
        case Node::Kind::Negate: return same_node(an, a.a, bn, b.a);
        case Node::Kind::Binary:
            return a.op == b.op && same_node(an, a.a, bn, b.a) && same_node(an, a.b, bn, b.b);
        case Node::Kind::Call: return a.func == b.func && same_node(an, a.a, bn, b.a);
    }
    return false;
}

}  // namespace

std::string Expression::print() const {
    std::string out;
    print_node(nodes_, root_, out);
    return out;
}

bool Expression::same_structure(const Expression& other) const {
    return same_node(nodes_, root_, other.nodes_, other.root_);
}

bool Expression::is_constant_zero() const {
    const Node& n = nodes_[static_cast<std::size_t>(root_)];
    return n.kind == Node::Kind::Constant && n.value == 0.0;
}

bool Expression::uses(Var v) const {
    for (const Node& n : nodes_)
        if (n.kind == Node::Kind::Variable && n.var == v) return true;
    return false;
}

std::int32_t ExpressionBuilder::constant(double v) {
    Node n;
    n.kind = Node::Kind::Constant;
    n.value = v;
    nodes_.push_back(n);
    return static_cast<std::int32_t>(nodes_.size() - 1);
}

std::int32_t ExpressionBuilder::variable(Var v) {
    Node n;
    n.kind = Node::Kind::Variable;
    n.var = v;
    nodes_.push_back(n);
    return static_cast<std::int32_t>(nodes_.size() - 1);
}

std::int32_t ExpressionBuilder::negate(std::int32_t a) {
    Node n;
    n.kind = Node::Kind::Negate;
    n.a = a;
    nodes_.push_back(n);
    return static_cast<std::int32_t>(nodes_.size() - 1);
}

std::int32_t ExpressionBuilder::binary(BinOp op, std::int32_t a, std::int32_t b) {
    Node n;
    n.kind = Node::Kind::Binary;
    n.op = op;
    n.a = a;
    n.b = b;
    nodes_.push_back(n);
    return static_cast<std::int32_t>(nodes_.size() - 1);
}

std::int32_t ExpressionBuilder::call(Func f, std::int32_t a) {
    Node n;
    n.kind = Node::Kind::Call;
    n.func = f;
    n.a = a;
    nodes_.push_back(n);
    return static_cast<std::int32_t>(nodes_.size() - 1);
}

Expression ExpressionBuilder::finish(std::int32_t root) {
    Expression e;
    e.nodes_ = std::move(nodes_);
    e.root_ = root;
    nodes_.clear();
    return e;
}

}  // namespace spvide::expr
