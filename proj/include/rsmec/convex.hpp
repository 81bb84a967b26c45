#pragma once

#include <functional>
#include <string>
#include <vector>

namespace rsmec::convex {

using Vec = std::vector<double>;

// Minimal dense row-major matrix, enough for the tiny Newton systems here.
class Mat {
  public:
    Mat() = default;
    Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, 0.0) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }
    void set_zero() { std::fill(a_.begin(), a_.end(), 0.0); }

  private:
    int rows_ = 0, cols_ = 0;
    Vec a_;
};

// Smooth scalar function with derivatives. grad overwrites its output;
// hess may be empty, which means identically zero (linear functions).
struct ScalarFn {
    std::string name;
    std::function<double(const Vec&)> value;
    std::function<void(const Vec&, Vec&)> grad;
    std::function<void(const Vec&, Mat&)> hess;
};

// min objective(x)  s.t.  inequalities(x) <= 0, lower <= x <= upper,
//                         eq_a x = eq_b.
// Objective and inequalities must be convex and twice differentiable on
// the interior of the feasible set.
struct ConvexProgram {
    int n = 0;
    ScalarFn objective;
    std::vector<ScalarFn> inequalities;
    Vec lower;  // may be empty (no box); -inf entries allowed
    Vec upper;  // may be empty; +inf entries allowed
    Mat eq_a;   // may be 0 x 0
    Vec eq_b;
};

enum class SolveStatus { optimal, max_iter, infeasible_start };

struct SolveReport {
    Vec x;
    double objective = 0.0;
    double kkt_residual = 0.0;
    int iterations = 0;  // total Newton steps
    SolveStatus status = SolveStatus::max_iter;
    std::string message;
    Vec stage_objectives;  // objective after each barrier stage
};

// Log-barrier interior-point method with damped Newton inner steps.
// x0 must be strictly feasible for all inequalities and bounds and
// satisfy the equality constraints. Terminates once the duality-gap
// surrogate m*mu drops below tol.
SolveReport solve(const ConvexProgram& p, Vec x0, double tol = 1e-8);

}  // namespace rsmec::convex
