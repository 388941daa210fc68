#include "nhtls/analytic.hpp"

#include "nhtls/errors.hpp"

#include <cmath>
#include <sstream>

namespace nhtls {

namespace {

const Complex kI(0.0, 1.0);

// cosh(x) e^{-|x|} and sinh(x) e^{-|x|}, finite for any x.
struct Scaled {
    double ch;
    double sh;
    double e;  // e^{-|x|}
};

Scaled scaled_hyperbolic(double x) {
    const double e = std::exp(-std::abs(x));
    const double e2 = e * e;
    return {0.5 * (1.0 + e2), (x >= 0.0 ? 0.5 : -0.5) * (1.0 - e2), e};
}

Operator2 matrix(Complex r11, Complex r12, Complex r21, Complex r22) {
    Operator2 m;
    m << r11, r12, r21, r22;
    return m;
}

ScenarioSolution from_matrix(const Operator2& rho) {
    return {rho, real_trace(rho), spin_averages(rho)};
}

}  // namespace

// ---------------------------------------------------------------- general

GeneralSolutionCoefficients GeneralSolutionCoefficients::from(const HamiltonianSpec& spec) {
    const double g = spec.gamma;
    const double b = spec.beta;
    const double a2 = spec.a2;
    const double W = -decay_coefficients(spec).z;

    GeneralSolutionCoefficients k;
    k.W = W;
    k.Gamma = 2.0 * g * spec.omega;
    k.omega_osc = 2.0 * b * spec.omega;
    k.alpha = 2.0 * a2 * spec.omega;
    k.gamma_tilde = std::sqrt(1.0 + g * g);

    const double s = b * b + g * g;
    const Complex m(1.0 - a2, g * b);  // 1 - a2 + i gamma beta

    k.A[1] = s - W * W;
    k.B[1] = 2.0 * b * W;
    k.C[1] = s + W * W;
    k.D[1] = 2.0 * g * W;

    k.A[2] = kI * W * m;
    k.C[2] = -k.A[2];
    k.B[2] = -Complex(g, b) * m;
    k.D[2] = kI * k.B[2];

    k.A[3] = std::conj(k.A[2]);
    k.C[3] = std::conj(k.C[2]);
    k.B[3] = std::conj(k.B[2]);
    k.D[3] = std::conj(k.D[2]);

    k.A[4] = -(1.0 - a2) * (1.0 - a2) - g * g * b * b;
    k.C[4] = -k.A[4];

    k.A[5] = a2 - 1.0 + b * b;
    k.C[5] = 1.0 - a2 + g * g;
    k.A[6] = -g * b * W;
    k.A[7] = k.C[5] - W * W;
    k.C[7] = k.A[5] + W * W;

    // Vanishing-population table, written with the positive root -W.
    const double root = -W;
    const double gt2 = 1.0 + g * g;
    k.A[8] = gt2 - 2.0 * root * root;
    k.A[9] = root * Complex(g * b, g * root - 1.0);
    k.B[5] = Complex(b * (gt2 - g * root), g * root * (g - root));
    return k;
}

GeneralSolution::GeneralSolution(const HamiltonianSpec& spec)
    : spec_(spec), beta_(spec.beta), gamma_(spec.gamma), a2_(spec.a2) {
    const auto dc = decay_coefficients(spec);
    const double radicand =
        (1.0 + gamma_ * gamma_) * (1.0 - beta_ * beta_) - a2_ * a2_;
    if (std::abs(dc.x + gamma_ * beta_) > 1e-12 || std::abs(dc.z * dc.z - radicand) > 1e-10) {
        std::ostringstream msg;
        msg << "scenario " << to_string(spec.scenario)
            << " is not a member of the general (gamma, beta, a2, W) family";
        throw DegenerateParameters(msg.str());
    }
    denom_ = beta_ * beta_ + gamma_ * gamma_;
    if (denom_ < kDenominatorFloor)
        throw DegenerateParameters("general closed form undefined for beta^2 + gamma^2 = 0");
    c_ = GeneralSolutionCoefficients::from(spec);
}

GeneralSolution::Basis GeneralSolution::basis(double t) const {
    const double gt = c_.Gamma * t;
    const double wt = c_.omega_osc * t;
    const Scaled h = scaled_hyperbolic(gt);
    return {h.e * std::cos(wt), h.e * std::sin(wt), h.ch, h.sh,
            std::exp(std::abs(gt) - gt)};
}

double GeneralSolution::gauge_factor(double t) const {
    return std::exp(-2.0 * (spec_.gauge() - gamma_) * spec_.omega * t);
}

double GeneralSolution::T_tilde_scaled(const Basis& b) const {
    return c_.A[5].real() * b.c + 0.5 * c_.B[1].real() * b.s + c_.C[5].real() * b.ch +
           0.5 * c_.D[1].real() * b.sh;
}

Operator2 GeneralSolution::rho(double t) const {
    const Basis b = basis(t);
    const double f = 0.5 * gauge_factor(t) * b.envelope / denom_;
    auto entry = [&](int k) {
        return f * (c_.A[k] * b.c + c_.B[k] * b.s + c_.C[k] * b.ch + c_.D[k] * b.sh);
    };
    return matrix(entry(1), entry(2), entry(3), entry(4));
}

double GeneralSolution::trace(double t) const {
    const Basis b = basis(t);
    return gauge_factor(t) * b.envelope / denom_ * T_tilde_scaled(b);
}

SpinAverages GeneralSolution::averages(double t) const {
    const Basis b = basis(t);
    const double T = T_tilde_scaled(b);
    const double A5 = c_.A[5].real();
    const double C5 = c_.C[5].real();
    const double W = c_.W;
    SpinAverages s;
    s.sx = (c_.A[6].real() * (b.c - b.ch) + gamma_ * A5 * b.s + beta_ * C5 * b.sh) / T;
    s.sy = (W * (a2_ - 1.0) * (b.c - b.ch) + beta_ * C5 * b.s - gamma_ * A5 * b.sh) / T;
    s.sz = (c_.A[7].real() * b.c + 0.5 * c_.B[1].real() * b.s + c_.C[7].real() * b.ch +
            0.5 * c_.D[1].real() * b.sh) /
           T;
    return s;
}

Operator2 general_rho(const HamiltonianSpec& spec, double t) { return GeneralSolution(spec).rho(t); }

double general_trace(const HamiltonianSpec& spec, double t) {
    return GeneralSolution(spec).trace(t);
}

SpinAverages general_averages(const HamiltonianSpec& spec, double t) {
    return GeneralSolution(spec).averages(t);
}

SpinAverages asymptotic_averages(const HamiltonianSpec& spec) {
    const GeneralSolution sol(spec);
    const auto& c = sol.coefficients();
    const double g = spec.gamma;
    const double b = spec.beta;
    const double a2 = spec.a2;
    const double W = c.W;
    if (g == 0.0)
        throw DegenerateParameters("no t -> infinity limit for gamma = 0 (undamped oscillation)");

    auto degenerate = [&](double den) {
        if (std::abs(den) < kDenominatorFloor) {
            std::ostringstream msg;
            msg << "asymptotic sigma_y undefined: denominator vanishes at gamma = " << g
                << ", beta = " << b << ", a2 = " << a2 << ", W = " << W;
            throw DegenerateParameters(msg.str());
        }
    };

    if (g > 0.0) {
        const double den = a2 - 1.0 - g * (g + W);
        degenerate(den);
        return {b, ((a2 - 1.0) * (g + W) + g * b * b) / den, (a2 + g * W) / (g * g + 1.0)};
    }
    // gamma < 0: cosh and -sinh dominate.
    const double A5 = c.A[5].real();
    const double C5 = c.C[5].real();
    const double half_d1 = 0.5 * c.D[1].real();
    const double den = C5 - half_d1;
    degenerate(den);
    return {(-c.A[6].real() - b * C5) / den, (-W * (a2 - 1.0) + g * A5) / den,
            (c.C[7].real() - half_d1) / den};
}

// ------------------------------------------------------- conserved energy

ScenarioSolution exp_decay_solution(double a2, double gamma, double omega, double t) {
    if (a2 == 0.0)
        throw DegenerateParameters("exponential-decay solution needs a2 != 0; use poly_decay_solution");
    const double alpha = 2.0 * a2 * omega;
    const double Gamma = 2.0 * gamma * omega;
    const double at = alpha * t;
    const Scaled half = scaled_hyperbolic(0.5 * at);
    const Scaled full = scaled_hyperbolic(at);
    // Every entry carries e^{|alpha| t - Gamma t} once the hyperbolic factors are scaled.
    const double env = std::exp(std::abs(at) - Gamma * t);
    const double inv_a2sq = 1.0 / (a2 * a2);

    const double r11 = std::pow(a2 * half.ch - half.sh, 2) * env * inv_a2sq;
    const Complex r12 =
        kI * 0.5 * inv_a2sq * (a2 - 1.0) * (full.e - full.ch + a2 * full.sh) * env;
    const double r22 = std::pow((a2 - 1.0) * half.sh, 2) * env * inv_a2sq;

    const double T = (a2 * a2 - a2 + 1.0) * full.ch - a2 * full.sh + (a2 - 1.0) * full.e;
    ScenarioSolution out;
    out.rho = matrix(r11, r12, -r12, r22);
    out.trace = env * inv_a2sq * T;
    out.averages.sx = 0.0;
    out.averages.sy = (a2 - 1.0) * (full.ch - a2 * full.sh - full.e) / T;
    out.averages.sz = a2 * ((a2 - 1.0) * full.e + std::exp(-at - std::abs(at))) / T;
    return out;
}

SpinAverages exp_decay_asymptote(double a2) {
    if (a2 == 0.0) throw DegenerateParameters("exponential-decay asymptote needs a2 != 0");
    if (a2 > 0.0) return {0.0, -1.0, 0.0};
    const double d = a2 * a2 + 1.0;
    return {0.0, (a2 * a2 - 1.0) / d, 2.0 * a2 / d};
}

ScenarioSolution poly_decay_solution(double gamma, double omega, double t) {
    const double x = omega * t;
    const double env = std::exp(-2.0 * gamma * omega * t);
    const Complex r12 = kI * x * (x - 1.0) * env;
    const double T = 2.0 * x * (x - 1.0) + 1.0;
    ScenarioSolution out;
    out.rho = matrix((x - 1.0) * (x - 1.0) * env, r12, -r12, x * x * env);
    out.trace = env * T;
    out.averages = {0.0, 2.0 * x * (1.0 - x) / T, (1.0 - 2.0 * x) / T};
    return out;
}

// --------------------------------------------------- vanishing population

ScenarioSolution vanishing_population_solution(double beta, double gamma, double omega, double t) {
    if (beta * beta > 1.0) throw ConstraintViolation("vanishing population requires beta^2 <= 1");
    const double denom = beta * beta + gamma * gamma;
    if (denom < kDenominatorFloor)
        throw DegenerateParameters("closed form undefined for beta^2 + gamma^2 = 0");
    const double W = std::sqrt(1.0 - beta * beta);
    const double gt2 = 1.0 + gamma * gamma;
    const double A8 = gt2 - 2.0 * W * W;
    const Complex A9 = W * Complex(gamma * beta, gamma * W - 1.0);
    const Complex B5(beta * (gt2 - gamma * W), gamma * W * (gamma - W));

    const double Gt = 2.0 * gamma * omega * t;
    const double wt = 2.0 * beta * omega * t;
    const Scaled h = scaled_hyperbolic(Gt);
    const double c = h.e * std::cos(wt);
    const double s = h.e * std::sin(wt);
    const double ch = h.ch;
    const double sh = h.sh;
    const double f = 0.5 * std::exp(std::abs(Gt) - Gt) / denom;

    const double r11 = f * (A8 * c + gt2 * ch - 2.0 * W * (beta * s + gamma * sh));
    const Complex r12 = f * (A9 * (c - ch) + B5 * (sh - kI * s));
    const double r22 = f * (2.0 * gamma * W - gt2) * (c - ch);
    return from_matrix(matrix(r11, r12, std::conj(r12), r22));
}

// ------------------------------------------------------------- dephasing

ScenarioSolution dephasing_solution(double gamma, double omega, double t) {
    if (gamma == 0.0) throw DegenerateParameters("dephasing solution needs gamma != 0");
    const double Gt = 2.0 * gamma * omega * t;
    const double e = std::exp(-Gt);
    const Complex r12 = (1.0 / (2.0 * gamma)) * ((gamma - kI) * e + kI * e * e);
    const double r22 = ((e - 1.0) * (e - 1.0) + gamma * gamma) / (2.0 * gamma * gamma);

    ScenarioSolution out;
    out.rho = matrix(0.5 * e * e, r12, std::conj(r12), r22);
    out.trace = 0.5 * e * e + r22;

    const Scaled h = scaled_hyperbolic(Gt);
    const double gt2 = 1.0 + gamma * gamma;
    const double den = gt2 * h.ch - h.e;
    out.averages.sx = gamma * gamma * h.e / den;
    out.averages.sy = gamma * (h.e - std::exp(-Gt - std::abs(Gt))) / den;
    out.averages.sz = (h.e - h.ch - gamma * gamma * h.sh) / den;
    return out;
}

// ----------------------------------------------------------- purification

PurificationSolutionTerms::PurificationSolutionTerms(double p_, double a2_, double gamma_,
                                                     double a0_, double omega_, int w_sign)
    : p(p_), a2(a2_), gamma(gamma_), a0(a0_), omega(omega_) {
    if (gamma == 0.0) throw DegenerateParameters("purification solution needs gamma != 0");
    const double radicand = 1.0 + gamma * gamma - a2 * a2;
    if (radicand < 0.0) throw DegenerateParameters("purification needs 1 + gamma^2 >= a2^2");
    W = (w_sign < 0 ? -1.0 : 1.0) * std::sqrt(radicand);
    Gamma = 2.0 * gamma * omega;
    Gamma_tilde = Gamma + 2.0 * a0 * omega;
    gamma_tilde_sq = 1.0 + gamma * gamma;
    p1 = 2.0 * p - 1.0;
    p_plus = gamma_tilde_sq + p1 * gamma * W;
    p_minus = gamma_tilde_sq - p1 * gamma * W;
    Upsilon = p1 * (a2 + gamma * W) + gamma_tilde_sq;
}

double PurificationSolutionTerms::Lambda(double t) const {
    return std::exp(-Gamma_tilde * t) / (4.0 * gamma * gamma);
}

double PurificationSolutionTerms::k1(double eta) const {
    return gamma * gamma + W * W + 2.0 * p * (1.0 + a2 - W * W + eta * gamma);
}

double PurificationSolutionTerms::k2(double eta) const {
    return gamma * gamma - W * W - 2.0 * p * (1.0 - W * W + eta * gamma) + 2.0;
}

namespace {

// Lambda(t) e^{k Gamma t} for k = 0, 1, 2, evaluated without forming e^{2 Gamma t}.
struct PurificationExponentials {
    double l0, l1, l2;
};

PurificationExponentials purification_exponentials(const PurificationSolutionTerms& q, double t) {
    const double pre = 1.0 / (4.0 * q.gamma * q.gamma);
    return {pre * std::exp(-q.Gamma_tilde * t), pre * std::exp((q.Gamma - q.Gamma_tilde) * t),
            pre * std::exp((2.0 * q.Gamma - q.Gamma_tilde) * t)};
}

}  // namespace

Operator2 purification_solution(double p, double a2, double gamma, double a0, double omega,
                                double t, int w_sign) {
    const PurificationSolutionTerms q(p, a2, gamma, a0, omega, w_sign);
    const auto [l0, l1, l2] = purification_exponentials(q, t);
    const double g = q.gamma;
    const double W = q.W;
    // Lambda (e^{Gamma t} - 1)^2 = l2 - 2 l1 + l0
    const double sq = l2 - 2.0 * l1 + l0;

    const double r11 = (q.k1(W) - 2.0 * g * W) * l2 - 2.0 * (q.k1(g) - 2.0 * g * g) * l1 +
                       (q.k1(-W) + 2.0 * g * W) * l0;
    const Complex r12 = kI * (g * (a2 + q.p1) * (l2 - l0) + W * (a2 * q.p1 + 1.0) * sq);
    const double r22 =
        q.k2(-W) * l2 + 2.0 * a2 * (p - 1.0) * sq - 2.0 * q.k2(g) * l1 + q.k2(W) * l0;
    return matrix(r11, r12, -r12, r22);
}

double purification_trace(double p, double a2, double gamma, double a0, double omega, double t,
                          int w_sign) {
    const PurificationSolutionTerms q(p, a2, gamma, a0, omega, w_sign);
    const auto [l0, l1, l2] = purification_exponentials(q, t);
    return 2.0 * (q.p_plus * l2 + a2 * q.p1 * (l2 - 2.0 * l1 + l0) - 2.0 * l1 + q.p_minus * l0);
}

PurificationBranch purification_branch(double p, double a2, double gamma, int w_sign) {
    const PurificationSolutionTerms q(p, a2, gamma, gamma, 1.0, w_sign);
    return std::abs(q.Upsilon) < kUpsilonTol ? PurificationBranch::AsymptoticallyMixed
                                             : PurificationBranch::AsymptoticallyPure;
}

double purification_critical_p(double a2, double gamma, int w_sign) {
    const PurificationSolutionTerms q(0.5, a2, gamma, gamma, 1.0, w_sign);
    const double s = a2 + gamma * q.W;
    if (std::abs(s) < kDenominatorFloor)
        throw DegenerateParameters("Upsilon = 0 has no solution for a2 + gamma W = 0");
    return 0.5 * (s - q.gamma_tilde_sq) / s;
}

Operator2 purification_limit(double p, double a2, double gamma, int w_sign) {
    const PurificationSolutionTerms q(p, a2, gamma, gamma, 1.0, w_sign);
    const double g = gamma;
    const double W = q.W;
    if (purification_branch(p, a2, gamma, w_sign) == PurificationBranch::AsymptoticallyMixed) {
        if (g < 0.0)
            throw DegenerateParameters("mixed-branch limit is derived for gamma > 0");
        const double den = W - a2 * g;
        if (std::abs(den) < kDenominatorFloor)
            throw DegenerateParameters("mixed-branch limit undefined for W = a2 gamma");
        const double gt2 = q.gamma_tilde_sq;
        return matrix(0.5 * (W - g) * (gt2 + a2 + g * W) / den, 0.5 * kI * W, -0.5 * kI * W,
                      0.5 * (W + g) * (gt2 - a2 - g * W) / den);
    }
    if (g > 0.0) {
        const double n = 2.0 * q.Upsilon;
        const Complex r12 = kI * (g * (a2 + q.p1) + W * (a2 * q.p1 + 1.0)) / n;
        return matrix((q.k1(W) - 2.0 * g * W) / n, r12, -r12, (q.k2(-W) + 2.0 * a2 * (p - 1.0)) / n);
    }
    // gamma < 0: the constant terms dominate.
    const double n = 2.0 * (a2 * q.p1 + q.p_minus);
    if (std::abs(n) < kDenominatorFloor)
        throw DegenerateParameters("purification limit undefined: leading trace term vanishes");
    const Complex r12 = kI * (-g * (a2 + q.p1) + W * (a2 * q.p1 + 1.0)) / n;
    return matrix((q.k1(-W) + 2.0 * g * W) / n, r12, -r12, (q.k2(W) + 2.0 * a2 * (p - 1.0)) / n);
}

double purification_mixed_det_limit(double a2, double gamma, int w_sign) {
    const PurificationSolutionTerms q(0.5, a2, gamma, gamma, 1.0, w_sign);
    const double g = gamma;
    const double W = q.W;
    const double den = W - a2 * g;
    if (std::abs(den) < kDenominatorFloor)
        throw DegenerateParameters("mixed-branch determinant undefined for W = a2 gamma");
    return 0.25 * g * g *
           (W * W * (g * g - 1.0) + 2.0 * a2 * g * W - g * g * q.gamma_tilde_sq) / (den * den);
}

}  // namespace nhtls
