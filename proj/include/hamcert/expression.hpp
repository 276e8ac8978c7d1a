#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hamcert/common.hpp"

namespace hamcert {

/// Parse failure with the byte offset of the offending token.
class ExprParseError : public ValidationError {
public:
    ExprParseError(std::size_t offset, const std::string& msg)
        : ValidationError(msg + " (at offset " + std::to_string(offset) + ")"),
          offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// Evaluation outside the declared domain (sqrt of a negative, log of a
/// non-positive, division by zero, ...), located at the source offset of
/// the operator that failed.
class ExprDomainError : public NumericError {
public:
    ExprDomainError(std::size_t offset, const std::string& msg)
        : NumericError(msg + " (at offset " + std::to_string(offset) + ")"),
          offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// Variables available to an expression.
struct ExprEnv {
    double t = 0.0;
    double u = 0.0;
    double v = 0.0;
    double r = 0.0;
};

/// A scalar expression over {t, u, v, r} with + - * / ^ (right-associative),
/// unary minus, abs/sqrt/min/max/exp/log and the constants pi and e.
///
/// Parsed once into a flat postfix program; evaluation is allocation-free.
/// str() prints a canonical form whose re-parse yields a structurally
/// identical program.
class Expression {
public:
    enum class Op : std::uint8_t {
        PushConst,
        PushT,
        PushU,
        PushV,
        PushR,
        Add,
        Sub,
        Mul,
        Div,
        Pow,
        Neg,
        Abs,
        Sqrt,
        Exp,
        Log,
        Min,
        Max,
    };

    struct Instr {
        Op op;
        double value = 0.0;    // PushConst payload
        std::uint32_t offset = 0; // source offset, for located errors
    };

    static Expression parse(std::string_view src);

    /// Expression that is the literal constant c.
    static Expression constant(double c);

    double eval(const ExprEnv& env) const;

    /// True if the program reads the given variable ('t', 'u', 'v' or 'r').
    bool uses(char var) const;

    /// Canonical printing. parse(str()) produces an equal program.
    std::string str() const;

    /// Replace every read of `var` by the program of `replacement`.
    Expression substitute(char var, const Expression& replacement) const;

    /// Structural equality: same operations and constants, offsets ignored.
    bool equals(const Expression& other) const;

    bool is_constant_one() const;

    const std::vector<Instr>& program() const { return prog_; }
    const std::string& source() const { return source_; }

private:
    std::vector<Instr> prog_;
    std::string source_;
};

} // namespace hamcert
