#include "hamcert/expression.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

namespace hamcert {

namespace {

using Op = Expression::Op;
using Instr = Expression::Instr;

struct Token {
    enum class Kind { Number, Ident, Punct, End } kind;
    std::string_view text;
    std::size_t offset;
    double number = 0.0;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) { advance(); }

    const Token& peek() const { return tok_; }

    Token next() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ >= src_.size()) {
            tok_ = {Token::Kind::End, {}, src_.size()};
            return;
        }
        const std::size_t start = pos_;
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            double value = 0.0;
            const char* first = src_.data() + pos_;
            const char* last = src_.data() + src_.size();
            auto [ptr, ec] = std::from_chars(first, last, value);
            if (ec != std::errc{}) throw ExprParseError(start, "malformed number");
            pos_ = static_cast<std::size_t>(ptr - src_.data());
            tok_ = {Token::Kind::Number, src_.substr(start, pos_ - start), start, value};
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            tok_ = {Token::Kind::Ident, src_.substr(start, pos_ - start), start};
            return;
        }
        ++pos_;
        tok_ = {Token::Kind::Punct, src_.substr(start, 1), start};
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    Token tok_;
};

const std::array<std::string_view, 10> kKnownIdents = {
    "t", "u", "v", "r", "pi", "e", "abs", "sqrt", "min", "max"};
const std::array<std::string_view, 2> kKnownIdents2 = {"exp", "log"};

std::size_t edit_distance(std::string_view a, std::string_view b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

std::string suggestions_for(std::string_view ident) {
    std::string s;
    auto consider = [&](std::string_view cand) {
        if (edit_distance(ident, cand) <= 2) {
            if (!s.empty()) s += ", ";
            s += cand;
        }
    };
    for (auto c : kKnownIdents) consider(c);
    for (auto c : kKnownIdents2) consider(c);
    return s;
}

class Parser {
public:
    explicit Parser(std::string_view src) : lex_(src) {}

    std::vector<Instr> parse() {
        parse_expr();
        const Token& t = lex_.peek();
        if (t.kind != Token::Kind::End)
            throw ExprParseError(t.offset, "unexpected trailing input '" + std::string(t.text) + "'");
        return std::move(prog_);
    }

private:
    void emit(Op op, std::size_t offset, double value = 0.0) {
        prog_.push_back({op, value, static_cast<std::uint32_t>(offset)});
    }

    bool accept_punct(char c) {
        const Token& t = lex_.peek();
        if (t.kind == Token::Kind::Punct && t.text.size() == 1 && t.text[0] == c) {
            lex_.next();
            return true;
        }
        return false;
    }

    void expect_punct(char c, const char* what) {
        const Token& t = lex_.peek();
        if (t.kind != Token::Kind::Punct || t.text.empty() || t.text[0] != c)
            throw ExprParseError(t.offset, std::string("expected '") + c + "' " + what);
        lex_.next();
    }

    // expr := term (('+'|'-') term)*
    void parse_expr() {
        parse_term();
        for (;;) {
            const Token& t = lex_.peek();
            if (t.kind == Token::Kind::Punct && (t.text == "+" || t.text == "-")) {
                const Token op = lex_.next();
                parse_term();
                emit(op.text == "+" ? Op::Add : Op::Sub, op.offset);
            } else {
                return;
            }
        }
    }

    // term := unary (('*'|'/') unary)*
    void parse_term() {
        parse_unary();
        for (;;) {
            const Token& t = lex_.peek();
            if (t.kind == Token::Kind::Punct && (t.text == "*" || t.text == "/")) {
                const Token op = lex_.next();
                parse_unary();
                emit(op.text == "*" ? Op::Mul : Op::Div, op.offset);
            } else {
                return;
            }
        }
    }

    // unary := '-' unary | power      (so -x^2 parses as -(x^2))
    void parse_unary() {
        const Token& t = lex_.peek();
        if (t.kind == Token::Kind::Punct && t.text == "-") {
            const Token op = lex_.next();
            parse_unary();
            emit(Op::Neg, op.offset);
            return;
        }
        parse_power();
    }

    // power := atom ('^' unary)?      (right-associative, exponent may be signed)
    void parse_power() {
        parse_atom();
        const Token& t = lex_.peek();
        if (t.kind == Token::Kind::Punct && t.text == "^") {
            const Token op = lex_.next();
            parse_unary();
            emit(Op::Pow, op.offset);
        }
    }

    void parse_atom() {
        const Token t = lex_.next();
        switch (t.kind) {
        case Token::Kind::Number:
            emit(Op::PushConst, t.offset, t.number);
            return;
        case Token::Kind::Punct:
            if (t.text == "(") {
                parse_expr();
                expect_punct(')', "to close '('");
                return;
            }
            throw ExprParseError(t.offset, "unexpected '" + std::string(t.text) + "'");
        case Token::Kind::Ident: {
            if (t.text == "t") { emit(Op::PushT, t.offset); return; }
            if (t.text == "u") { emit(Op::PushU, t.offset); return; }
            if (t.text == "v") { emit(Op::PushV, t.offset); return; }
            if (t.text == "r") { emit(Op::PushR, t.offset); return; }
            if (t.text == "pi") { emit(Op::PushConst, t.offset, std::numbers::pi); return; }
            if (t.text == "e") { emit(Op::PushConst, t.offset, std::numbers::e); return; }
            Op fn;
            int arity = 1;
            if (t.text == "abs") fn = Op::Abs;
            else if (t.text == "sqrt") fn = Op::Sqrt;
            else if (t.text == "exp") fn = Op::Exp;
            else if (t.text == "log") fn = Op::Log;
            else if (t.text == "min") { fn = Op::Min; arity = 2; }
            else if (t.text == "max") { fn = Op::Max; arity = 2; }
            else {
                std::string msg = "unknown identifier '" + std::string(t.text) + "'";
                const std::string sugg = suggestions_for(t.text);
                if (!sugg.empty()) msg += "; did you mean: " + sugg + "?";
                throw ExprParseError(t.offset, msg);
            }
            expect_punct('(', ("after '" + std::string(t.text) + "'").c_str());
            parse_expr();
            if (arity == 2) {
                expect_punct(',', "between arguments");
                parse_expr();
            }
            expect_punct(')', "to close argument list");
            emit(fn, t.offset);
            return;
        }
        case Token::Kind::End:
            throw ExprParseError(t.offset, "unexpected end of input");
        }
        throw ExprParseError(t.offset, "unexpected token");
    }

    Lexer lex_;
    std::vector<Instr> prog_;
};

constexpr int kStackMax = 128;

int stack_effect(Op op) {
    switch (op) {
    case Op::PushConst:
    case Op::PushT:
    case Op::PushU:
    case Op::PushV:
    case Op::PushR:
        return +1;
    case Op::Neg:
    case Op::Abs:
    case Op::Sqrt:
    case Op::Exp:
    case Op::Log:
        return 0;
    default:
        return -1;
    }
}

void check_program(const std::vector<Instr>& prog) {
    int depth = 0;
    for (const Instr& ins : prog) {
        const int eff = stack_effect(ins.op);
        if (eff <= 0 && depth < 1 - eff)
            throw ExprParseError(ins.offset, "internal: malformed program");
        depth += eff;
        if (depth > kStackMax) throw ExprParseError(ins.offset, "expression too deeply nested");
    }
    if (depth != 1) throw ExprParseError(0, "internal: malformed program");
}

// precedence levels used by the canonical printer
constexpr int kPrecAdd = 1, kPrecMul = 2, kPrecNeg = 3, kPrecPow = 4, kPrecAtom = 5;

std::string format_double(double x) {
    std::array<char, 48> buf;
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), ptr);
}

} // namespace

Expression Expression::parse(std::string_view src) {
    Expression e;
    e.prog_ = Parser(src).parse();
    e.source_ = std::string(src);
    check_program(e.prog_);
    return e;
}

Expression Expression::constant(double c) {
    Expression e;
    e.prog_.push_back({Op::PushConst, c, 0});
    e.source_ = format_double(c);
    return e;
}

double Expression::eval(const ExprEnv& env) const {
    std::array<double, kStackMax> stack;
    int top = -1;
    for (const Instr& ins : prog_) {
        switch (ins.op) {
        case Op::PushConst: stack[++top] = ins.value; break;
        case Op::PushT: stack[++top] = env.t; break;
        case Op::PushU: stack[++top] = env.u; break;
        case Op::PushV: stack[++top] = env.v; break;
        case Op::PushR: stack[++top] = env.r; break;
        case Op::Add: stack[top - 1] += stack[top]; --top; break;
        case Op::Sub: stack[top - 1] -= stack[top]; --top; break;
        case Op::Mul: stack[top - 1] *= stack[top]; --top; break;
        case Op::Div:
            if (stack[top] == 0.0) throw ExprDomainError(ins.offset, "division by zero");
            stack[top - 1] /= stack[top];
            --top;
            break;
        case Op::Pow: {
            const double b = stack[top - 1], e = stack[top];
            if (b == 0.0 && e < 0.0) throw ExprDomainError(ins.offset, "zero raised to a negative power");
            if (b < 0.0 && e != std::floor(e))
                throw ExprDomainError(ins.offset, "negative base with non-integer exponent");
            stack[top - 1] = std::pow(b, e);
            --top;
            break;
        }
        case Op::Neg: stack[top] = -stack[top]; break;
        case Op::Abs: stack[top] = std::abs(stack[top]); break;
        case Op::Sqrt:
            if (stack[top] < 0.0) throw ExprDomainError(ins.offset, "sqrt of a negative value");
            stack[top] = std::sqrt(stack[top]);
            break;
        case Op::Exp: stack[top] = std::exp(stack[top]); break;
        case Op::Log:
            if (stack[top] <= 0.0) throw ExprDomainError(ins.offset, "log of a non-positive value");
            stack[top] = std::log(stack[top]);
            break;
        case Op::Min: stack[top - 1] = std::min(stack[top - 1], stack[top]); --top; break;
        case Op::Max: stack[top - 1] = std::max(stack[top - 1], stack[top]); --top; break;
        }
    }
    return stack[0];
}

bool Expression::uses(char var) const {
    Op needle;
    switch (var) {
    case 't': needle = Op::PushT; break;
    case 'u': needle = Op::PushU; break;
    case 'v': needle = Op::PushV; break;
    case 'r': needle = Op::PushR; break;
    default: return false;
    }
    for (const Instr& ins : prog_)
        if (ins.op == needle) return true;
    return false;
}

std::string Expression::str() const {
    struct Frag {
        std::string text;
        int prec;
    };
    std::vector<Frag> stack;
    auto pop = [&]() {
        Frag f = std::move(stack.back());
        stack.pop_back();
        return f;
    };
    auto paren_if = [](const Frag& f, bool cond) {
        return cond ? "(" + f.text + ")" : f.text;
    };
    for (const Instr& ins : prog_) {
        switch (ins.op) {
        case Op::PushConst: stack.push_back({format_double(ins.value), kPrecAtom}); break;
        case Op::PushT: stack.push_back({"t", kPrecAtom}); break;
        case Op::PushU: stack.push_back({"u", kPrecAtom}); break;
        case Op::PushV: stack.push_back({"v", kPrecAtom}); break;
        case Op::PushR: stack.push_back({"r", kPrecAtom}); break;
        case Op::Add: {
            Frag b = pop(), a = pop();
            stack.push_back({paren_if(a, a.prec < kPrecAdd) + " + " + paren_if(b, b.prec < kPrecAdd), kPrecAdd});
            break;
        }
        case Op::Sub: {
            Frag b = pop(), a = pop();
            stack.push_back({paren_if(a, a.prec < kPrecAdd) + " - " + paren_if(b, b.prec <= kPrecAdd), kPrecAdd});
            break;
        }
        case Op::Mul: {
            Frag b = pop(), a = pop();
            stack.push_back({paren_if(a, a.prec < kPrecMul) + "*" + paren_if(b, b.prec < kPrecMul), kPrecMul});
            break;
        }
        case Op::Div: {
            Frag b = pop(), a = pop();
            stack.push_back({paren_if(a, a.prec < kPrecMul) + "/" + paren_if(b, b.prec <= kPrecMul), kPrecMul});
            break;
        }
        case Op::Pow: {
            Frag b = pop(), a = pop();
            stack.push_back({paren_if(a, a.prec <= kPrecPow) + "^" + paren_if(b, b.prec < kPrecPow), kPrecPow});
            break;
        }
        case Op::Neg: {
            Frag a = pop();
            stack.push_back({"-" + paren_if(a, a.prec < kPrecNeg), kPrecNeg});
            break;
        }
        case Op::Abs:
        case Op::Sqrt:
        case Op::Exp:
        case Op::Log: {
            Frag a = pop();
            const char* name = ins.op == Op::Abs    ? "abs"
                               : ins.op == Op::Sqrt ? "sqrt"
                               : ins.op == Op::Exp  ? "exp"
                                                    : "log";
            stack.push_back({std::string(name) + "(" + a.text + ")", kPrecAtom});
            break;
        }
        case Op::Min:
        case Op::Max: {
            Frag b = pop(), a = pop();
            const char* name = ins.op == Op::Min ? "min" : "max";
            stack.push_back({std::string(name) + "(" + a.text + ", " + b.text + ")", kPrecAtom});
            break;
        }
        }
    }
    return stack.back().text;
}

Expression Expression::substitute(char var, const Expression& replacement) const {
    Op needle;
    switch (var) {
    case 't': needle = Op::PushT; break;
    case 'u': needle = Op::PushU; break;
    case 'v': needle = Op::PushV; break;
    case 'r': needle = Op::PushR; break;
    default: throw ValidationError("substitute: unknown variable");
    }
    Expression out;
    for (const Instr& ins : prog_) {
        if (ins.op == needle) {
            for (const Instr& rins : replacement.prog_) out.prog_.push_back(rins);
        } else {
            out.prog_.push_back(ins);
        }
    }
    check_program(out.prog_);
    out.source_ = out.str();
    return out;
}

bool Expression::equals(const Expression& other) const {
    if (prog_.size() != other.prog_.size()) return false;
    for (std::size_t i = 0; i < prog_.size(); ++i) {
        if (prog_[i].op != other.prog_[i].op) return false;
        if (prog_[i].op == Op::PushConst && prog_[i].value != other.prog_[i].value) return false;
    }
    return true;
}

bool Expression::is_constant_one() const {
    return prog_.size() == 1 && prog_[0].op == Op::PushConst && prog_[0].value == 1.0;
}

} // namespace hamcert
