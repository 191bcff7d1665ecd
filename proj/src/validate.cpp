#include "chemodg/celldensity.hpp"

#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>

namespace chemodg {

namespace {

// Exact rational with overflow-checked arithmetic; falls back to doubles
// when a parameter is not representable in 64 bits.
struct Rat {
    long long num = 0;
    long long den = 1;

    void reduce() {
        if (den < 0) {
            num = -num;
            den = -den;
        }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

std::optional<Rat> rat_from_double(double x) {
    if (!std::isfinite(x)) return std::nullopt;
    if (x == 0.0) return Rat{0, 1};
    int exp = 0;
    double m = std::frexp(x, &exp);  // x = m * 2^exp, |m| in [0.5, 1)
    long long mant = static_cast<long long>(std::ldexp(m, 53));  // exact
    exp -= 53;
    Rat r{mant, 1};
    while (exp > 0) {
        if (r.num > (1LL << 62) || r.num < -(1LL << 62)) return std::nullopt;
        r.num *= 2;
        --exp;
    }
    while (exp < 0) {
        if (r.num % 2 == 0) {
            r.num /= 2;
        } else {
            if (r.den > (1LL << 62)) return std::nullopt;
            r.den *= 2;
        }
        ++exp;
    }
    r.reduce();
    return r;
}

std::optional<Rat> rat_mul(const Rat& a, const Rat& b) {
    __int128 n = static_cast<__int128>(a.num) * b.num;
    __int128 d = static_cast<__int128>(a.den) * b.den;
    __int128 limit = static_cast<__int128>(1) << 62;
    if (n > limit || n < -limit || d > limit) return std::nullopt;
    Rat r{static_cast<long long>(n), static_cast<long long>(d)};
    r.reduce();
    return r;
}

std::optional<Rat> rat_add(const Rat& a, const Rat& b) {
    __int128 n = static_cast<__int128>(a.num) * b.den + static_cast<__int128>(b.num) * a.den;
    __int128 d = static_cast<__int128>(a.den) * b.den;
    __int128 limit = static_cast<__int128>(1) << 62;
    if (n > limit || n < -limit || d > limit) return std::nullopt;
    Rat r{static_cast<long long>(n), static_cast<long long>(d)};
    r.reduce();
    return r;
}

int rat_cmp(const Rat& a, const Rat& b) {
    __int128 lhs = static_cast<__int128>(a.num) * b.den;
    __int128 rhs = static_cast<__int128>(b.num) * a.den;
    return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

std::string rat_str(const Rat& r) {
    std::ostringstream os;
    os << r.num;
    if (r.den != 1) os << "/" << r.den;
    return os.str();
}

}  // namespace

std::vector<ConditionReport> validate_params(const ModelParams& p, int dim,
                                             const ValidateOptions& opts) {
    std::vector<ConditionReport> reports;

    // Gradient-damping condition: max{1, d/(d+1)(n2+alpha), tau d/(d+1)(n3+beta)} < gamma <= 2.
    {
        ConditionReport rep;
        rep.name = "condgamma";
        int tau = p.effective_tau();

        Rat frac{static_cast<long long>(dim), static_cast<long long>(dim) + 1};
        auto r_n2a = [&]() -> std::optional<Rat> {
            auto n2 = rat_from_double(p.n2);
            auto al = rat_from_double(p.alpha);
            if (!n2 || !al) return std::nullopt;
            return rat_add(*n2, *al);
        }();
        auto r_n3b = [&]() -> std::optional<Rat> {
            auto n3 = rat_from_double(p.n3);
            auto be = rat_from_double(p.beta);
            if (!n3 || !be) return std::nullopt;
            return rat_add(*n3, *be);
        }();
        auto r_gamma = rat_from_double(p.gamma);

        std::optional<Rat> threshold = Rat{1, 1};
        if (threshold && r_n2a) {
            auto t = rat_mul(frac, *r_n2a);
            if (t && rat_cmp(*t, *threshold) > 0) threshold = t;
            if (!t) threshold = std::nullopt;
        } else {
            threshold = std::nullopt;
        }
        if (threshold && tau == 1) {
            if (r_n3b) {
                auto t = rat_mul(frac, *r_n3b);
                if (t && rat_cmp(*t, *threshold) > 0) threshold = t;
                if (!t) threshold = std::nullopt;
            } else {
                threshold = std::nullopt;
            }
        }

        double thr_double;
        if (threshold) {
            rep.exact = true;
            rep.threshold_num = threshold->num;
            rep.threshold_den = threshold->den;
            thr_double = threshold->value();
        } else {
            thr_double = std::max(
                {1.0, dim / (dim + 1.0) * (p.n2 + p.alpha),
                 tau == 1 ? dim / (dim + 1.0) * (p.n3 + p.beta) : 0.0});
        }
        rep.threshold = thr_double;
        if (threshold && r_gamma) {
            rep.satisfied = rat_cmp(*threshold, *r_gamma) < 0 && p.gamma <= 2.0;
        } else {
            rep.satisfied = thr_double < p.gamma && p.gamma <= 2.0;
        }
        rep.margin = std::min(p.gamma - thr_double, 2.0 - p.gamma);
        std::ostringstream os;
        os << "threshold " << (threshold ? rat_str(*threshold) : "(inexact)") << " = "
           << thr_double << ", gamma = " << p.gamma;
        rep.detail = os.str();
        reports.push_back(rep);
    }

    {
        ConditionReport rep;
        rep.name = "logistic-exponents";
        rep.satisfied = 1.0 <= p.rho && p.rho < p.k;
        rep.margin = p.k - p.rho;
        std::ostringstream os;
        os << "need 1 <= rho < k; rho = " << p.rho << ", k = " << p.k;
        rep.detail = os.str();
        reports.push_back(rep);
    }

    {
        ConditionReport rep;
        rep.name = "gamma-range";
        rep.satisfied = 1.0 <= p.gamma && p.gamma <= 2.0;
        rep.margin = std::min(p.gamma - 1.0, 2.0 - p.gamma);
        std::ostringstream os;
        os << "gamma = " << p.gamma << " must lie in [1, 2]";
        rep.detail = os.str();
        reports.push_back(rep);
    }

    {
        ConditionReport rep;
        rep.name = "coefficient-signs";
        double mn = std::min({p.chi, p.xi, p.lambda, p.mu, p.c});
        rep.satisfied = mn >= 0.0;
        rep.margin = mn;
        rep.detail = "chi, xi, lambda, mu, c must be nonnegative";
        reports.push_back(rep);
    }

    {
        // Mass ceiling max{ integral u0, (lambda/mu |Omega|^(k-rho))^(1/(k-rho)) }.
        ConditionReport rep;
        rep.name = "mass-ceiling";
        rep.satisfied = p.mu > 0.0 && p.rho < p.k;
        std::ostringstream os;
        if (rep.satisfied && opts.domain_measure) {
            double pow_term = std::pow(p.lambda / p.mu * std::pow(*opts.domain_measure, p.k - p.rho),
                                       1.0 / (p.k - p.rho));
            double ceiling = opts.initial_mass ? std::max(*opts.initial_mass, pow_term) : pow_term;
            rep.threshold = ceiling;
            rep.margin = ceiling;
            os << "mass of u stays below " << ceiling;
            if (!opts.initial_mass) os << " (steady part; initial mass not provided)";
        } else if (rep.satisfied) {
            os << "bounded (provide domain measure for the value)";
        } else {
            rep.margin = 0.0;
            os << "unbounded: requires mu > 0 and rho < k";
        }
        rep.detail = os.str();
        reports.push_back(rep);
    }

    return reports;
}

}  // namespace chemodg
