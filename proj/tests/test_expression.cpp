#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hamcert/expression.hpp"

using namespace hamcert;

namespace {

double at(const Expression& e, double t, double u, double v, double r = 0.0) {
    ExprEnv env;
    env.t = t;
    env.u = u;
    env.v = v;
    env.r = r;
    return e.eval(env);
}

} // namespace

TEST_CASE("example nonlinearities evaluate to the worked values") {
    const Expression f1 = Expression::parse("(abs(u)^3 + abs(v)^3 + 1)/4");
    CHECK(at(f1, 0.0, 1.0, 1.0) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(at(f1, 0.3, 0.0, 0.0) == doctest::Approx(0.25).epsilon(1e-15));

    const Expression f2 = Expression::parse("(sqrt(abs(u)) + v^2)/3");
    CHECK(at(f2, 0.0, 0.0, 5.0) == doctest::Approx(25.0 / 3.0).epsilon(1e-15));

    const Expression zero = Expression::parse("0");
    CHECK(at(zero, 0.4, -2.0, 7.0) == 0.0);
}

TEST_CASE("precedence and associativity") {
    CHECK(at(Expression::parse("2^3^2"), 0, 0, 0) == 512.0);     // right-assoc
    CHECK(at(Expression::parse("-2^2"), 0, 0, 0) == -4.0);       // ^ binds tighter than unary -
    CHECK(at(Expression::parse("(-2)^2"), 0, 0, 0) == 4.0);
    CHECK(at(Expression::parse("2^-2"), 0, 0, 0) == 0.25);       // signed exponent
    CHECK(at(Expression::parse("1 - 2 - 3"), 0, 0, 0) == -4.0);  // left-assoc
    CHECK(at(Expression::parse("6/3/2"), 0, 0, 0) == 1.0);
    CHECK(at(Expression::parse("1 + 2*3"), 0, 0, 0) == 7.0);
    CHECK(at(Expression::parse("pi"), 0, 0, 0) == std::numbers::pi);
    CHECK(at(Expression::parse("e^2"), 0, 0, 0) ==
          doctest::Approx(std::exp(2.0)).epsilon(1e-15));
    CHECK(at(Expression::parse("min(3, max(1, 2))"), 0, 0, 0) == 2.0);
}

TEST_CASE("print/parse round-trips to an identical program") {
    const char* sources[] = {
        "(abs(u)^3 + abs(v)^3 + 1)/4",
        "(sqrt(abs(u)) + v^2)/3",
        "-t^2/2 - 0.0625 + 1/2",
        "2^-3 + min(t, u) - max(v, -1)",
        "e^2*(1 - t)^2",
        "-(u - v)/(1 - t*t)",
        "log(exp(t) + 1)",
        "1 - 2 - 3*4/5^6",
        "-(-(-u))",
        "(t + u)*(t - u)^(v + 1)",
    };
    for (const char* src : sources) {
        CAPTURE(src);
        const Expression a = Expression::parse(src);
        const Expression b = Expression::parse(a.str());
        CHECK(a.equals(b));
        CHECK(b.equals(Expression::parse(b.str()))); // printing is a fixed point
    }
}

TEST_CASE("parse errors carry byte offsets") {
    try {
        Expression::parse("1 + @");
        FAIL("expected throw");
    } catch (const ExprParseError& e) {
        CHECK(e.offset() == 4);
    }
    try {
        Expression::parse("abs(u");
        FAIL("expected throw");
    } catch (const ExprParseError& e) {
        CHECK(e.offset() == 5);
    }
    CHECK_THROWS_AS(Expression::parse("1 + "), ExprParseError);
    CHECK_THROWS_AS(Expression::parse("min(1)"), ExprParseError);
    CHECK_THROWS_AS(Expression::parse("1 2"), ExprParseError);
}

TEST_CASE("unknown identifiers come with suggestions") {
    try {
        Expression::parse("sqr(u)");
        FAIL("expected throw");
    } catch (const ExprParseError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("sqr") != std::string::npos);
        CHECK(msg.find("sqrt") != std::string::npos);
    }
    try {
        Expression::parse("x + 1");
        FAIL("expected throw");
    } catch (const ExprParseError& e) {
        CHECK(std::string(e.what()).find("unknown identifier") != std::string::npos);
    }
}

TEST_CASE("domain errors are located") {
    const Expression sq = Expression::parse("sqrt(u)");
    CHECK_THROWS_AS(at(sq, 0, -1.0, 0), ExprDomainError);
    CHECK_THROWS_AS(at(Expression::parse("log(t)"), 0.0, 0, 0), ExprDomainError);
    CHECK_THROWS_AS(at(Expression::parse("1/t"), 0.0, 0, 0), ExprDomainError);
    CHECK_THROWS_AS(at(Expression::parse("(-2)^(1/2)"), 0, 0, 0), ExprDomainError);
    CHECK_THROWS_AS(at(Expression::parse("0^-1"), 0, 0, 0), ExprDomainError);
    try {
        at(Expression::parse("1 + sqrt(u)"), 0, -1, 0);
        FAIL("expected throw");
    } catch (const ExprDomainError& e) {
        CHECK(e.offset() == 4);
    }
}

TEST_CASE("variable usage detection and substitution") {
    const Expression f = Expression::parse("u^2 + t");
    CHECK(f.uses('u'));
    CHECK(f.uses('t'));
    CHECK_FALSE(f.uses('v'));
    CHECK_FALSE(f.uses('r'));

    const Expression h = Expression::parse("r^2 + 1");
    const Expression r_of_t = Expression::parse("2 - t");
    const Expression composed = h.substitute('r', r_of_t);
    CHECK_FALSE(composed.uses('r'));
    CHECK(at(composed, 0.5, 0, 0) == doctest::Approx((1.5 * 1.5) + 1.0));
}

TEST_CASE("pathologically deep nesting is rejected, reasonable depth is fine") {
    // right-leaning sums grow the evaluation stack one slot per level
    std::string deep = "u";
    for (int i = 0; i < 200; ++i) deep = "1 + (" + deep + ")";
    CHECK_THROWS_AS(Expression::parse(deep), ExprParseError);

    std::string ok = "t";
    for (int i = 0; i < 40; ++i) ok = "(" + ok + ")";
    CHECK_NOTHROW(Expression::parse(ok));
}

TEST_CASE("evaluation is deterministic") {
    const Expression f = Expression::parse("exp(t)*u - log(1 + v^2)");
    const double a = at(f, 0.3, 1.7, -2.2);
    const double b = at(f, 0.3, 1.7, -2.2);
    CHECK(a == b);
}
