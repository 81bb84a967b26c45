#include "rsmec/convex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rsmec::convex {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxOuter = 200;
constexpr int kMaxInner = 50;

struct BoundRef {
    int var;
    double limit;
    bool is_lower;
};

// Solves A x = b in place via partially pivoted LU. A is overwritten.
bool lu_solve(Mat& a, Vec& b) {
    const int n = a.rows();
    std::vector<int> piv(n);
    for (int i = 0; i < n; ++i) piv[i] = i;
    for (int k = 0; k < n; ++k) {
        int imax = k;
        double vmax = std::fabs(a(k, k));
        for (int i = k + 1; i < n; ++i) {
            const double v = std::fabs(a(i, k));
            if (v > vmax) {
                vmax = v;
                imax = i;
            }
        }
        if (vmax < 1e-300) return false;
        if (imax != k) {
            for (int j = 0; j < n; ++j) std::swap(a(k, j), a(imax, j));
            std::swap(b[k], b[imax]);
        }
        for (int i = k + 1; i < n; ++i) {
            const double f = a(i, k) / a(k, k);
            a(i, k) = f;
            for (int j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
            b[i] -= f * b[k];
        }
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= a(i, j) * b[j];
        b[i] = s / a(i, i);
    }
    return true;
}

// In-place Cholesky; returns false if the matrix is not (numerically) PD.
bool cholesky(Mat& a) {
    const int n = a.rows();
    for (int j = 0; j < n; ++j) {
        double d = a(j, j);
        for (int k = 0; k < j; ++k) d -= a(j, k) * a(j, k);
        if (d <= 0.0 || !std::isfinite(d)) return false;
        const double l = std::sqrt(d);
        a(j, j) = l;
        for (int i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (int k = 0; k < j; ++k) s -= a(i, k) * a(j, k);
            a(i, j) = s / l;
        }
    }
    return true;
}

void cholesky_solve(const Mat& l, Vec& b) {
    const int n = l.rows();
    for (int i = 0; i < n; ++i) {
        double s = b[i];
        for (int j = 0; j < i; ++j) s -= l(i, j) * b[j];
        b[i] = s / l(i, i);
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= l(j, i) * b[j];
        b[i] = s / l(i, i);
    }
}

class BarrierProblem {
  public:
    BarrierProblem(const ConvexProgram& p) : p_(p), n_(p.n) {
        for (int j = 0; j < n_; ++j) {
            if (!p.lower.empty() && p.lower[j] > -kInf)
                bounds_.push_back({j, p.lower[j], true});
            if (!p.upper.empty() && p.upper[j] < kInf)
                bounds_.push_back({j, p.upper[j], false});
        }
        gvals_.resize(p.inequalities.size());
        gbuf_.assign(n_, 0.0);
        hbuf_ = Mat(n_, n_);
    }

    int constraint_count() const {
        return static_cast<int>(p_.inequalities.size() + bounds_.size());
    }

    // Evaluates all inequality constraints; returns false (with the name
    // of the first violation) unless every one is strictly negative.
    bool strictly_feasible(const Vec& x, std::string* violated = nullptr) {
        for (size_t k = 0; k < p_.inequalities.size(); ++k) {
            gvals_[k] = p_.inequalities[k].value(x);
            if (!(gvals_[k] < 0.0)) {
                if (violated) *violated = p_.inequalities[k].name;
                return false;
            }
        }
        for (const BoundRef& b : bounds_) {
            const double g = b.is_lower ? b.limit - x[b.var] : x[b.var] - b.limit;
            if (!(g < 0.0)) {
                if (violated)
                    *violated = (b.is_lower ? "lower bound on x" : "upper bound on x") +
                                std::to_string(b.var);
                return false;
            }
        }
        return true;
    }

    // phi = f0 + mu * sum -log(-g). Returns +inf outside the domain.
    double phi(const Vec& x, double mu) {
        double v = p_.objective.value(x);
        for (const ScalarFn& g : p_.inequalities) {
            const double gv = g.value(x);
            if (!(gv < 0.0)) return kInf;
            v -= mu * std::log(-gv);
        }
        for (const BoundRef& b : bounds_) {
            const double gv = b.is_lower ? b.limit - x[b.var] : x[b.var] - b.limit;
            if (!(gv < 0.0)) return kInf;
            v -= mu * std::log(-gv);
        }
        return std::isfinite(v) ? v : kInf;
    }

    // Gradients of constraints whose central-path multiplier mu/(-g)
    // clears the threshold; used for the least-squares KKT residual.
    void active_columns(const Vec& x, double mu, double threshold,
                        std::vector<Vec>& cols) {
        cols.clear();
        for (const ScalarFn& g : p_.inequalities) {
            const double gv = g.value(x);
            if (!(gv < 0.0) || mu / (-gv) < threshold) continue;
            Vec col(n_, 0.0);
            g.grad(x, col);
            cols.push_back(std::move(col));
        }
        for (const BoundRef& b : bounds_) {
            const double gv = b.is_lower ? b.limit - x[b.var] : x[b.var] - b.limit;
            if (!(gv < 0.0) || mu / (-gv) < threshold) continue;
            Vec col(n_, 0.0);
            col[b.var] = b.is_lower ? -1.0 : 1.0;
            cols.push_back(std::move(col));
        }
    }

    // Gradient and Hessian of phi at a strictly feasible x.
    void derivatives(const Vec& x, double mu, Vec& grad, Mat& hess) {
        grad.assign(n_, 0.0);
        hess = Mat(n_, n_);
        p_.objective.grad(x, gbuf_);
        for (int j = 0; j < n_; ++j) grad[j] = gbuf_[j];
        if (p_.objective.hess) {
            p_.objective.hess(x, hbuf_);
            for (int i = 0; i < n_; ++i)
                for (int j = 0; j < n_; ++j) hess(i, j) = hbuf_(i, j);
        }
        for (const ScalarFn& g : p_.inequalities) {
            const double gv = g.value(x);
            g.grad(x, gbuf_);
            const double inv = 1.0 / (-gv);
            for (int i = 0; i < n_; ++i) {
                grad[i] += mu * inv * gbuf_[i];
                for (int j = 0; j < n_; ++j)
                    hess(i, j) += mu * inv * inv * gbuf_[i] * gbuf_[j];
            }
            if (g.hess) {
                g.hess(x, hbuf_);
                for (int i = 0; i < n_; ++i)
                    for (int j = 0; j < n_; ++j) hess(i, j) += mu * inv * hbuf_(i, j);
            }
        }
        for (const BoundRef& b : bounds_) {
            const double gv = b.is_lower ? b.limit - x[b.var] : x[b.var] - b.limit;
            const double sign = b.is_lower ? -1.0 : 1.0;
            const double inv = 1.0 / (-gv);
            grad[b.var] += mu * inv * sign;
            hess(b.var, b.var) += mu * inv * inv;
        }
    }

  private:
    const ConvexProgram& p_;
    int n_;
    std::vector<BoundRef> bounds_;
    Vec gvals_;
    Vec gbuf_;
    Mat hbuf_;
};

// Newton step for min phi s.t. A dx = 0, with Levenberg damping when the
// Hessian fails to factor. Returns false if no step could be produced.
bool newton_step(const Mat& hess, const Vec& grad, const Mat& eq_a, Vec& dx, Vec& nu) {
    const int n = static_cast<int>(grad.size());
    const int m = eq_a.rows();
    double scale = 0.0;
    for (int i = 0; i < n; ++i) scale = std::max(scale, std::fabs(hess(i, i)));
    if (scale <= 0.0) scale = 1.0;

    for (double damp = 0.0; damp <= 1e8;
         damp = (damp == 0.0 ? 1e-12 : damp * 100.0)) {
        if (m == 0) {
            Mat h = hess;
            for (int i = 0; i < n; ++i) h(i, i) += damp * scale;
            if (!cholesky(h)) continue;
            dx.assign(grad.begin(), grad.end());
            cholesky_solve(h, dx);
            for (double& v : dx) v = -v;
            nu.clear();
            return true;
        }
        Mat kkt(n + m, n + m);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) kkt(i, j) = hess(i, j);
            kkt(i, i) += damp * scale;
            for (int r = 0; r < m; ++r) {
                kkt(i, n + r) = eq_a(r, i);
                kkt(n + r, i) = eq_a(r, i);
            }
        }
        Vec rhs(n + m, 0.0);
        for (int i = 0; i < n; ++i) rhs[i] = -grad[i];
        if (!lu_solve(kkt, rhs)) continue;
        dx.assign(rhs.begin(), rhs.begin() + n);
        nu.assign(rhs.begin() + n, rhs.end());
        bool ok = true;
        for (double v : dx) ok = ok && std::isfinite(v);
        if (ok) return true;
    }
    return false;
}

}  // namespace

SolveReport solve(const ConvexProgram& p, Vec x0, double tol) {
    if (static_cast<int>(x0.size()) != p.n)
        throw std::invalid_argument("convex::solve: x0 has wrong dimension");

    BarrierProblem bp(p);
    SolveReport rep;
    rep.x = x0;

    std::string violated;
    if (!bp.strictly_feasible(x0, &violated)) {
        rep.status = SolveStatus::infeasible_start;
        rep.message = "start point violates constraint: " + violated;
        rep.objective = p.objective.value(x0);
        return rep;
    }
    const int m_eq = p.eq_a.rows();
    for (int r = 0; r < m_eq; ++r) {
        double resid = -p.eq_b[r];
        for (int j = 0; j < p.n; ++j) resid += p.eq_a(r, j) * x0[j];
        if (std::fabs(resid) > 1e-9) {
            rep.status = SolveStatus::infeasible_start;
            rep.message = "start point violates equality constraint";
            rep.objective = p.objective.value(x0);
            return rep;
        }
    }

    const int m_ineq = bp.constraint_count();
    Vec x = x0, grad, dx, nu, xt(p.n);
    Mat hess;
    double mu = 1.0;
    bool inner_converged = true;

    for (int outer = 0; outer < kMaxOuter; ++outer) {
        inner_converged = false;
        const bool final_stage = m_ineq == 0 || m_ineq * mu <= tol;
        // loose centering on the way down, tight residual on the last stage
        const double stage_gtol = final_stage ? 0.05 * tol : 1e-6;
        for (int inner = 0; inner < kMaxInner; ++inner) {
            bp.derivatives(x, mu, grad, hess);
            if (!newton_step(hess, grad, p.eq_a, dx, nu)) break;
            ++rep.iterations;

            double rnorm = 0.0;
            for (int i = 0; i < p.n; ++i) {
                double r = grad[i];
                for (int r_eq = 0; r_eq < m_eq; ++r_eq) r += p.eq_a(r_eq, i) * nu[r_eq];
                rnorm = std::max(rnorm, std::fabs(r));
            }
            double decrement = 0.0;
            for (int i = 0; i < p.n; ++i) decrement -= grad[i] * dx[i];
            const double phi0 = bp.phi(x, mu);
            // second condition: predicted progress below the FP noise of phi
            if (rnorm <= stage_gtol || decrement <= 1e-18 * (1.0 + std::fabs(phi0))) {
                inner_converged = true;
                break;
            }
            double alpha = 1.0;
            bool stepped = false;
            for (int ls = 0; ls < 60; ++ls) {
                for (int i = 0; i < p.n; ++i) xt[i] = x[i] + alpha * dx[i];
                const double phit = bp.phi(xt, mu);
                if (phit <= phi0 - 1e-4 * alpha * decrement) {
                    x = xt;
                    stepped = true;
                    break;
                }
                alpha *= 0.5;
            }
            if (!stepped) {
                inner_converged = true;  // step size underflowed; stationary enough
                break;
            }
        }
        rep.stage_objectives.push_back(p.objective.value(x));
        if (m_ineq == 0 || m_ineq * mu <= tol) break;
        mu *= 0.1;
    }

    // Stationarity residual with least-squares multipliers over the
    // near-active set; raw central-path multipliers are noise-limited
    // once constraints sit within a few ulps of their boundary.
    Vec f0g(p.n, 0.0);
    p.objective.grad(x, f0g);
    std::vector<Vec> cols;
    bp.active_columns(x, mu, 1e-8, cols);
    const int k_ineq = static_cast<int>(cols.size());
    for (int r = 0; r < m_eq; ++r) {
        Vec col(p.n, 0.0);
        for (int j = 0; j < p.n; ++j) col[j] = p.eq_a(r, j);
        cols.push_back(std::move(col));
    }
    const int k = static_cast<int>(cols.size());
    Vec multipliers(k, 0.0);
    if (k > 0) {
        Mat ata(k, k);
        Vec atb(k, 0.0);
        double diag_scale = 0.0;
        for (int a = 0; a < k; ++a) {
            for (int b = 0; b < k; ++b) {
                double s = 0.0;
                for (int j = 0; j < p.n; ++j) s += cols[a][j] * cols[b][j];
                ata(a, b) = s;
            }
            diag_scale = std::max(diag_scale, ata(a, a));
            double s = 0.0;
            for (int j = 0; j < p.n; ++j) s += cols[a][j] * f0g[j];
            atb[a] = -s;
        }
        for (int a = 0; a < k; ++a) ata(a, a) += 1e-12 * std::max(diag_scale, 1.0);
        if (lu_solve(ata, atb)) multipliers = atb;
        for (int a = 0; a < k_ineq; ++a) multipliers[a] = std::max(0.0, multipliers[a]);
    }
    double resid = 0.0;
    for (int j = 0; j < p.n; ++j) {
        double r = f0g[j];
        for (int a = 0; a < k; ++a) r += multipliers[a] * cols[a][j];
        resid = std::max(resid, std::fabs(r));
    }

    rep.x = x;
    rep.objective = p.objective.value(x);
    rep.kkt_residual = resid;
    rep.status = (m_ineq == 0 || m_ineq * mu <= tol) && inner_converged && resid <= tol
                     ? SolveStatus::optimal
                     : SolveStatus::max_iter;
    return rep;
}

}  // namespace rsmec::convex
