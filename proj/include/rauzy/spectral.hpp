#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "rauzy/errors.hpp"
#include "rauzy/word.hpp"

namespace rauzy {

/// Monic characteristic polynomial det(XI - M) with exact integer
/// coefficients; c[i] is the coefficient of X^i, c[d] == 1.
struct CharPoly {
    std::vector<std::int64_t> c;

    int degree() const { return static_cast<int>(c.size()) - 1; }

    double eval(double x) const {
        double r = 0.0;
        for (int i = degree(); i >= 0; --i) r = r * x + static_cast<double>(c[static_cast<std::size_t>(i)]);
        return r;
    }

    double eval_derivative(double x) const {
        double r = 0.0;
        for (int i = degree(); i >= 1; --i)
            r = r * x + static_cast<double>(i) * static_cast<double>(c[static_cast<std::size_t>(i)]);
        return r;
    }
};

/// Faddeev-LeVerrier recursion; every intermediate stays integral.
inline CharPoly char_poly(const IncidenceMatrix& m) {
    const int d = m.d;
    CharPoly p;
    p.c.assign(static_cast<std::size_t>(d) + 1, 0);
    p.c[static_cast<std::size_t>(d)] = 1;

    std::vector<std::int64_t> a(m.a.begin(), m.a.end()); // A_k
    std::vector<std::int64_t> next(a.size());
    for (int k = 1; k <= d; ++k) {
        std::int64_t trace = 0;
        for (int i = 0; i < d; ++i) trace += a[static_cast<std::size_t>(i) * d + i];
        if (trace % k != 0) throw numeric_error("Faddeev-LeVerrier trace not divisible (overflow?)");
        const std::int64_t ck = -trace / k;
        p.c[static_cast<std::size_t>(d - k)] = ck;
        if (k == d) break;
        // A_{k+1} = M (A_k + ck I)
        for (int i = 0; i < d; ++i) a[static_cast<std::size_t>(i) * d + i] += ck;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                std::int64_t s = 0;
                for (int l = 0; l < d; ++l)
                    s += m.a[static_cast<std::size_t>(i) * d + l] * a[static_cast<std::size_t>(l) * d + j];
                next[static_cast<std::size_t>(i) * d + j] = s;
            }
        std::swap(a, next);
    }
    return p;
}

/// det M, read off the characteristic polynomial: det(0*I - M) = c0.
inline std::int64_t determinant(const CharPoly& p) {
    return (p.degree() % 2 == 0) ? p.c[0] : -p.c[0];
}

inline std::string to_string(const CharPoly& p) {
    std::string s;
    for (int i = p.degree(); i >= 0; --i) {
        std::int64_t c = p.c[static_cast<std::size_t>(i)];
        if (c == 0) continue;
        if (s.empty())
            s += (c < 0) ? "-" : "";
        else
            s += (c < 0) ? " - " : " + ";
        const std::int64_t mag = c < 0 ? -c : c;
        if (mag != 1 || i == 0) s += std::to_string(mag);
        if (i >= 1) s += "X";
        if (i >= 2) s += "^" + std::to_string(i);
    }
    return s.empty() ? "0" : s;
}

/// All roots of a monic integer polynomial (Durand-Kerner, deterministic
/// start values, Newton polish for near-real roots).
inline std::vector<std::complex<double>> poly_roots(const CharPoly& p) {
    const int n = p.degree();
    std::vector<std::complex<double>> coeff(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) coeff[static_cast<std::size_t>(i)] = static_cast<double>(p.c[static_cast<std::size_t>(i)]);

    auto eval = [&](std::complex<double> z) {
        std::complex<double> r = 0.0;
        for (int i = n; i >= 0; --i) r = r * z + coeff[static_cast<std::size_t>(i)];
        return r;
    };

    std::vector<std::complex<double>> z(static_cast<std::size_t>(n));
    const std::complex<double> g(0.4, 0.9);
    std::complex<double> acc = 1.0;
    for (int i = 0; i < n; ++i) {
        acc *= g;
        z[static_cast<std::size_t>(i)] = acc;
    }

    for (int iter = 0; iter < 1000; ++iter) {
        double shift = 0.0;
        for (int i = 0; i < n; ++i) {
            std::complex<double> denom = 1.0;
            for (int j = 0; j < n; ++j)
                if (j != i) denom *= z[static_cast<std::size_t>(i)] - z[static_cast<std::size_t>(j)];
            std::complex<double> delta = eval(z[static_cast<std::size_t>(i)]) / denom;
            z[static_cast<std::size_t>(i)] -= delta;
            shift = std::max(shift, std::abs(delta));
        }
        if (shift < 1e-14) break;
    }

    for (auto& r : z) {
        if (std::abs(r.imag()) < 1e-8) {
            double x = r.real();
            for (int it = 0; it < 60; ++it) {
                double f = p.eval(x), df = p.eval_derivative(x);
                if (df == 0.0) break;
                double nx = x - f / df;
                if (std::abs(nx - x) < 1e-15 * (1.0 + std::abs(x))) { x = nx; break; }
                x = nx;
            }
            if (std::abs(p.eval(x)) <= std::abs(eval(r)) + 1e-12) r = {x, 0.0};
        }
    }

    std::sort(z.begin(), z.end(), [](const std::complex<double>& a, const std::complex<double>& b) {
        double ma = std::abs(a), mb = std::abs(b);
        if (ma != mb) return ma > mb;
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });
    return z;
}

namespace detail {

// Divides p by the monic quadratic X^2 + q1 X + q0 over the integers.
// Returns true on zero remainder.
inline bool divides_quadratic(const CharPoly& p, std::int64_t q1, std::int64_t q0) {
    const int n = p.degree();
    std::vector<std::int64_t> r(p.c.rbegin(), p.c.rend()); // descending powers
    for (int i = 0; i + 2 <= n; ++i) {
        const std::int64_t lead = r[static_cast<std::size_t>(i)];
        r[static_cast<std::size_t>(i + 1)] -= lead * q1;
        r[static_cast<std::size_t>(i + 2)] -= lead * q0;
        r[static_cast<std::size_t>(i)] = 0;
    }
    return r[static_cast<std::size_t>(n - 1)] == 0 && r[static_cast<std::size_t>(n)] == 0;
}

inline bool has_integer_root(const CharPoly& p) {
    const std::int64_t c0 = p.c[0];
    if (c0 == 0) return true; // X divides
    auto value_is_zero = [&](std::int64_t r) {
        // Horner over __int128 so large candidates cannot wrap.
        __int128 acc = 0;
        for (int i = p.degree(); i >= 0; --i) {
            acc = acc * r + p.c[static_cast<std::size_t>(i)];
            if (acc > (__int128(1) << 100) || acc < -(__int128(1) << 100)) return false;
        }
        return acc == 0;
    };
    const std::int64_t limit = c0 < 0 ? -c0 : c0;
    for (std::int64_t div = 1; div * div <= limit; ++div) {
        if (limit % div != 0) continue;
        for (std::int64_t cand : {div, -div, limit / div, -(limit / div)})
            if (value_is_zero(cand)) return true;
    }
    return false;
}

// Exhaustive search for a monic integer quadratic factor. Complete because
// any factor's roots are roots of p, so the Cauchy bound caps both
// coefficients; the constant term must divide c0.
inline bool has_quadratic_factor(const CharPoly& p) {
    const std::int64_t c0 = p.c[0];
    if (c0 == 0) return true;
    std::int64_t maxc = 0;
    for (int i = 0; i < p.degree(); ++i)
        maxc = std::max<std::int64_t>(maxc, std::llabs(p.c[static_cast<std::size_t>(i)]));
    const double bound = 1.0 + static_cast<double>(maxc);
    const std::int64_t q1max = static_cast<std::int64_t>(std::floor(2.0 * bound)) + 1;
    const std::int64_t q0max = static_cast<std::int64_t>(std::floor(bound * bound)) + 1;
    const std::int64_t limit = c0 < 0 ? -c0 : c0;
    for (std::int64_t div = 1; div <= limit && div <= q0max; ++div) {
        if (limit % div != 0) continue;
        for (std::int64_t q0 : {div, -div})
            for (std::int64_t q1 = -q1max; q1 <= q1max; ++q1)
                if (divides_quadratic(p, q1, q0)) return true;
    }
    return false;
}

// Candidate integer factors proposed from subsets of the numeric roots and
// confirmed by exact division; a hit is a proof of reducibility, a miss is
// only heuristic evidence of irreducibility.
inline bool subset_factor_found(const CharPoly& p, const std::vector<std::complex<double>>& roots) {
    const int n = p.degree();
    if (n > 20) return false;
    for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
        int sz = 0;
        for (int i = 0; i < n; ++i) sz += (mask >> i) & 1;
        if (sz == 0 || sz == n) continue;
        // elementary symmetric functions of the chosen roots
        std::vector<std::complex<double>> e(static_cast<std::size_t>(sz) + 1, 0.0);
        e[0] = 1.0;
        int used = 0;
        for (int i = 0; i < n; ++i) {
            if (!((mask >> i) & 1)) continue;
            ++used;
            for (int j = used; j >= 1; --j)
                e[static_cast<std::size_t>(j)] = e[static_cast<std::size_t>(j)] -
                                                 roots[static_cast<std::size_t>(i)] * e[static_cast<std::size_t>(j - 1)];
            // convention: e holds coefficients of prod (X - r) below the top
        }
        bool integral = true;
        std::vector<std::int64_t> f(static_cast<std::size_t>(sz) + 1);
        f[static_cast<std::size_t>(sz)] = 1;
        for (int j = 1; j <= sz && integral; ++j) {
            std::complex<double> v = e[static_cast<std::size_t>(j)];
            double re = std::round(v.real());
            if (std::abs(v.imag()) > 1e-6 || std::abs(v.real() - re) > 1e-6 || std::abs(re) > 1e15)
                integral = false;
            else
                f[static_cast<std::size_t>(sz - j)] = static_cast<std::int64_t>(re);
        }
        if (!integral) continue;
        // exact synthetic division by the candidate factor
        std::vector<std::int64_t> r(p.c.rbegin(), p.c.rend());
        bool ok = true;
        for (int i = 0; i + sz <= n && ok; ++i) {
            const std::int64_t lead = r[static_cast<std::size_t>(i)];
            for (int j = 1; j <= sz; ++j)
                r[static_cast<std::size_t>(i + j)] -= lead * f[static_cast<std::size_t>(sz - j)];
            r[static_cast<std::size_t>(i)] = 0;
        }
        for (int i = n - sz + 1; i <= n; ++i) ok = ok && r[static_cast<std::size_t>(i)] == 0;
        if (ok) return true;
    }
    return false;
}

} // namespace detail

struct Classification {
    bool irreducible = false;
    bool unimodular = false;
    bool pisot = false;
    bool irreducible_exact = true; // false when only the heuristic route decided it
    std::string reasons;
};

/// Irreducibility over Q is decided exactly for degree <= 5 (a nontrivial
/// factorization must contain a linear or quadratic factor). Beyond that,
/// reducibility is still certified exactly via root-subset candidates, but a
/// negative answer is heuristic and flagged in `reasons`.
inline Classification classify(const IncidenceMatrix& m) {
    Classification out;
    const CharPoly p = char_poly(m);
    const int d = p.degree();
    const std::int64_t det = determinant(p);
    out.unimodular = det == 1 || det == -1;

    const auto roots = poly_roots(p);

    bool reducible;
    if (d <= 1) {
        reducible = false;
        out.irreducible_exact = true;
    } else if (d <= 5) {
        reducible = detail::has_integer_root(p) || (d >= 4 && detail::has_quadratic_factor(p));
        out.irreducible_exact = true;
    } else if (detail::subset_factor_found(p, roots)) {
        reducible = true;
        out.irreducible_exact = true;
    } else {
        reducible = false;
        out.irreducible_exact = false;
    }
    out.irreducible = !reducible;

    const double margin = 1e-9;
    const std::complex<double> dom = roots.empty() ? std::complex<double>(0, 0) : roots[0];
    bool pisot = !roots.empty() && std::abs(dom.imag()) <= margin * (1.0 + std::abs(dom)) &&
                 dom.real() > 1.0 + margin;
    for (std::size_t i = 1; i < roots.size() && pisot; ++i)
        pisot = std::abs(roots[i]) < 1.0 - margin;
    out.pisot = pisot;

    char buf[160];
    std::snprintf(buf, sizeof buf, "det=%lld; charpoly %s; dominant root %.12g",
                  static_cast<long long>(det), to_string(p).c_str(), dom.real());
    out.reasons = buf;
    out.reasons += out.irreducible ? "; irreducible" : "; reducible";
    if (!out.irreducible_exact) out.reasons += " (heuristic: no integer root subset found, degree > 5)";
    if (!pisot && !roots.empty()) {
        double second = roots.size() > 1 ? std::abs(roots[1]) : 0.0;
        std::snprintf(buf, sizeof buf, "; not Pisot type (second modulus %.6g)", second);
        out.reasons += buf;
    }
    return out;
}

/// Perron-Frobenius data plus a fixed orthonormal basis of the stable
/// hyperplane {x : <v_L, x> = 0}, which pins the plotting coordinates.
struct PerronData {
    double beta = 0.0;
    std::vector<double> right; // u_R, entrywise positive, sum 1
    std::vector<double> left;  // v_L, scaled so <v_L, u_R> = 1
    std::vector<std::vector<double>> basis; // d-1 orthonormal vectors
    double tol = 1e-10;

    int dim() const { return static_cast<int>(right.size()); }
    int stable_dim() const { return static_cast<int>(basis.size()); }
};

/// Point in stable-plane coordinates (d-1 entries).
using StablePoint = std::vector<double>;

namespace detail {

inline std::vector<double> solve_null_vector(const IncidenceMatrix& m, double beta, bool transpose) {
    const int d = m.d;
    std::vector<double> a(static_cast<std::size_t>(d) * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            a[static_cast<std::size_t>(i) * d + j] =
                static_cast<double>(transpose ? m.at(j, i) : m.at(i, j)) - (i == j ? beta : 0.0);

    // row echelon with partial pivoting; the lone pivot-free column spans the kernel
    std::vector<int> pivot_of_row(static_cast<std::size_t>(d), -1);
    std::vector<char> col_used(static_cast<std::size_t>(d), 0);
    int row = 0;
    for (int col = 0; col < d && row < d; ++col) {
        int best = -1;
        double mag = 1e-9;
        for (int r = row; r < d; ++r) {
            double v = std::abs(a[static_cast<std::size_t>(r) * d + col]);
            if (v > mag) { mag = v; best = r; }
        }
        if (best < 0) continue;
        for (int j = 0; j < d; ++j)
            std::swap(a[static_cast<std::size_t>(best) * d + j], a[static_cast<std::size_t>(row) * d + j]);
        const double piv = a[static_cast<std::size_t>(row) * d + col];
        for (int r = row + 1; r < d; ++r) {
            const double f = a[static_cast<std::size_t>(r) * d + col] / piv;
            for (int j = col; j < d; ++j)
                a[static_cast<std::size_t>(r) * d + j] -= f * a[static_cast<std::size_t>(row) * d + j];
        }
        pivot_of_row[static_cast<std::size_t>(row)] = col;
        col_used[static_cast<std::size_t>(col)] = 1;
        ++row;
    }
    int free_col = -1;
    for (int col = 0; col < d; ++col)
        if (!col_used[static_cast<std::size_t>(col)]) {
            if (free_col >= 0) throw numeric_error("dominant eigenvalue appears degenerate");
            free_col = col;
        }
    if (free_col < 0) throw numeric_error("no kernel direction found at the dominant eigenvalue");

    std::vector<double> x(static_cast<std::size_t>(d), 0.0);
    x[static_cast<std::size_t>(free_col)] = 1.0;
    for (int r = row - 1; r >= 0; --r) {
        const int pc = pivot_of_row[static_cast<std::size_t>(r)];
        double s = 0.0;
        for (int j = pc + 1; j < d; ++j) s += a[static_cast<std::size_t>(r) * d + j] * x[static_cast<std::size_t>(j)];
        x[static_cast<std::size_t>(pc)] = -s / a[static_cast<std::size_t>(r) * d + pc];
    }
    return x;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

} // namespace detail

/// Dominant eigenvalue by power iteration, polished by Newton on the exact
/// characteristic polynomial; eigenvectors from the kernel of M - beta I.
inline PerronData perron_data(const IncidenceMatrix& m, double tol = 1e-10) {
    if (tol <= 0) throw validation_error("tolerance must be positive");
    const int d = m.d;
    PerronData pd;
    pd.tol = tol;

    // power iteration
    std::vector<double> x(static_cast<std::size_t>(d), 1.0 / d);
    double lambda = 0.0;
    bool converged = false;
    for (int it = 0; it < 100000; ++it) {
        std::vector<double> y(static_cast<std::size_t>(d), 0.0);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                y[static_cast<std::size_t>(i)] += static_cast<double>(m.at(i, j)) * x[static_cast<std::size_t>(j)];
        double norm = 0.0;
        for (double v : y) norm += std::abs(v);
        if (norm == 0.0) throw numeric_error("power iteration collapsed to zero");
        double est = detail::dot(y, x) / detail::dot(x, x);
        for (double& v : y) v /= norm;
        x = std::move(y);
        if (it > 0 && std::abs(est - lambda) < 1e-13 * std::max(1.0, std::abs(est))) {
            lambda = est;
            converged = true;
            break;
        }
        lambda = est;
    }
    if (!converged) throw numeric_error("power iteration did not converge (input primitive?)");

    const CharPoly p = char_poly(m);
    double beta = lambda;
    for (int it = 0; it < 80; ++it) {
        const double f = p.eval(beta), df = p.eval_derivative(beta);
        if (df == 0.0) break;
        const double nb = beta - f / df;
        if (std::abs(nb - beta) < 1e-16 * std::max(1.0, std::abs(beta))) { beta = nb; break; }
        beta = nb;
    }
    if (std::abs(p.eval(beta)) > tol * std::max(1.0, std::abs(p.eval_derivative(beta))))
        throw numeric_error("Newton polish left a large characteristic-polynomial residual");
    pd.beta = beta;

    if (d == 1) {
        pd.right = {1.0};
        pd.left = {1.0};
        return pd;
    }

    pd.right = detail::solve_null_vector(m, beta, false);
    double sum = 0.0;
    for (double v : pd.right) sum += v;
    if (sum == 0.0) throw numeric_error("right eigenvector has zero coordinate sum");
    for (double& v : pd.right) v /= sum;
    for (double v : pd.right)
        if (!(v > 0.0)) throw numeric_error("right dominant eigenvector not positive (input primitive?)");

    pd.left = detail::solve_null_vector(m, beta, true);
    const double scale = detail::dot(pd.left, pd.right);
    if (std::abs(scale) < 1e-12) throw numeric_error("left/right eigenvector normalization failed");
    for (double& v : pd.left) v /= scale;

    // residual checks
    for (int i = 0; i < d; ++i) {
        double ru = 0.0, lv = 0.0;
        for (int j = 0; j < d; ++j) {
            ru += static_cast<double>(m.at(i, j)) * pd.right[static_cast<std::size_t>(j)];
            lv += pd.left[static_cast<std::size_t>(j)] * static_cast<double>(m.at(j, i));
        }
        if (std::abs(ru - beta * pd.right[static_cast<std::size_t>(i)]) > tol * (1.0 + beta) ||
            std::abs(lv - beta * pd.left[static_cast<std::size_t>(i)]) > tol * (1.0 + beta))
            throw numeric_error("eigenvector residual exceeds tolerance");
    }

    // Gram-Schmidt over the projections of e_0 .. e_{d-2} onto the stable hyperplane
    for (int i = 0; i < d - 1; ++i) {
        std::vector<double> w(static_cast<std::size_t>(d), 0.0);
        w[static_cast<std::size_t>(i)] = 1.0;
        const double comp = pd.left[static_cast<std::size_t>(i)];
        for (int j = 0; j < d; ++j) w[static_cast<std::size_t>(j)] -= comp * pd.right[static_cast<std::size_t>(j)];
        for (const auto& b : pd.basis) {
            const double proj = detail::dot(w, b);
            for (int j = 0; j < d; ++j) w[static_cast<std::size_t>(j)] -= proj * b[static_cast<std::size_t>(j)];
        }
        double norm = std::sqrt(detail::dot(w, w));
        if (norm < 1e-8) throw numeric_error("stable-plane basis degenerated");
        for (double& v : w) v /= norm;
        pd.basis.push_back(std::move(w));
    }
    return pd;
}

/// pi_s: kill the expanding component along u_R, then read coordinates in
/// the fixed stable basis.
inline StablePoint project_stable(const PerronData& pd, const std::vector<double>& x) {
    const int d = pd.dim();
    std::vector<double> y(x);
    const double comp = detail::dot(pd.left, x);
    for (int j = 0; j < d; ++j) y[static_cast<std::size_t>(j)] -= comp * pd.right[static_cast<std::size_t>(j)];
    StablePoint out(static_cast<std::size_t>(pd.stable_dim()));
    for (int i = 0; i < pd.stable_dim(); ++i) out[static_cast<std::size_t>(i)] = detail::dot(pd.basis[static_cast<std::size_t>(i)], y);
    return out;
}

inline StablePoint project_stable(const PerronData& pd, const AbelianVector& x) {
    std::vector<double> xd(x.begin(), x.end());
    return project_stable(pd, xd);
}

/// Matrix of M restricted to the stable hyperplane, in basis coordinates.
/// For Pisot input its spectral radius is < 1 (the GIFS contraction).
inline std::vector<double> stable_action(const PerronData& pd, const IncidenceMatrix& m) {
    const int k = pd.stable_dim(), d = pd.dim();
    std::vector<double> s(static_cast<std::size_t>(k) * k, 0.0);
    for (int j = 0; j < k; ++j) {
        std::vector<double> mb(static_cast<std::size_t>(d), 0.0);
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c)
                mb[static_cast<std::size_t>(r)] += static_cast<double>(m.at(r, c)) * pd.basis[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)];
        for (int i = 0; i < k; ++i)
            s[static_cast<std::size_t>(i) * k + j] = detail::dot(pd.basis[static_cast<std::size_t>(i)], mb);
    }
    return s;
}

} // namespace rauzy
