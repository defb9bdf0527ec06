#ifndef STCH_PROBLEMS_PROBLEM_HPP
#define STCH_PROBLEMS_PROBLEM_HPP

#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "stch/core.hpp"

namespace stch {

/// Raised by Problem::evaluate for decisions outside the box (or non-integral
/// decisions on an integrality-enforcing problem).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/**
 * @brief A box-constrained vector objective with an analytic Jacobian.
 *
 * Subclasses implement the raw formulas; the public entry points check the
 * decision against the box first. Evaluation is pure and thread-safe.
 */
class Problem {
 public:
  Problem(std::string name, std::string label, Vector lower, Vector upper, int m)
      : name_(std::move(name)), label_(std::move(label)), lower_(std::move(lower)), upper_(std::move(upper)), m_(m) {
    detail::require_same_size(lower_.size(), upper_.size(), "problem bounds");
    detail::require((lower_.array() < upper_.array()).all(), "problem bounds must satisfy lower < upper");
    integer_.assign(static_cast<std::size_t>(lower_.size()), false);
  }
  virtual ~Problem() = default;

  Problem(const Problem&) = default;
  Problem& operator=(const Problem&) = default;

  [[nodiscard]] const std::string& name() const { return name_; }
  /// Human-readable label used in tables ("BarTruss", ...).
  [[nodiscard]] const std::string& label() const { return label_; }
  [[nodiscard]] int n() const { return static_cast<int>(lower_.size()); }
  [[nodiscard]] int m() const { return m_; }
  [[nodiscard]] const Vector& lower() const { return lower_; }
  [[nodiscard]] const Vector& upper() const { return upper_; }
  [[nodiscard]] const std::vector<bool>& integrality() const { return integer_; }
  [[nodiscard]] bool enforces_integrality() const { return enforce_integrality_; }

  [[nodiscard]] bool contains(const Vector& x) const {
    return x.size() == lower_.size() && (x.array() >= lower_.array()).all() && (x.array() <= upper_.array()).all();
  }

  [[nodiscard]] ObjectiveVector evaluate(const Vector& x) const {
    check_domain(x);
    return ObjectiveVector(evaluate_unchecked(x));
  }

  /// m x n matrix of partial derivatives. Hinge terms use derivative 0 at the kink.
  [[nodiscard]] Matrix jacobian(const Vector& x) const {
    check_domain(x);
    return jacobian_unchecked(x);
  }

  /// Evaluates after rounding integer-flagged variables to the nearest integer.
  [[nodiscard]] ObjectiveVector evaluate_rounded(const Vector& x) const {
    Vector r = x;
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      if (integer_[static_cast<std::size_t>(i)]) r[i] = std::round(r[i]);
    }
    check_domain(r, /*allow_fractional=*/false);
    return ObjectiveVector(evaluate_unchecked(r));
  }

  [[nodiscard]] Vector midpoint() const { return 0.5 * (lower_ + upper_); }

  [[nodiscard]] virtual Vector evaluate_unchecked(const Vector& x) const = 0;
  [[nodiscard]] virtual Matrix jacobian_unchecked(const Vector& x) const = 0;

 protected:
  void set_integer(std::vector<bool> flags, bool enforce) {
    integer_ = std::move(flags);
    enforce_integrality_ = enforce;
  }

 private:
  void check_domain(const Vector& x, bool allow_fractional = false) const {
    if (x.size() != lower_.size()) {
      std::ostringstream os;
      os << name_ << ": expected " << lower_.size() << " decision variables, got " << x.size();
      throw ContractViolation(os.str());
    }
    if (!x.allFinite() || !contains(x)) throw DomainError(name_ + ": decision outside the box");
    if (enforce_integrality_ && !allow_fractional) {
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (integer_[static_cast<std::size_t>(i)] && x[i] != std::round(x[i])) {
          throw DomainError(name_ + ": non-integer value for an integer variable");
        }
      }
    }
  }

  std::string name_;
  std::string label_;
  Vector lower_;
  Vector upper_;
  int m_;
  std::vector<bool> integer_;
  bool enforce_integrality_ = false;
};

using ProblemPtr = std::shared_ptr<const Problem>;

/**
 * Convex bi-objective toy f1 = x^2, f2 = (x - 1)^2 on [-1, 2]. Its Pareto
 * set is [0, 1]; used for the TCH vs STCH convergence race.
 */
class ToyProblem final : public Problem {
 public:
  ToyProblem() : Problem("toy", "Toy", Vector::Constant(1, -1.0), Vector::Constant(1, 2.0), 2) {}

  [[nodiscard]] Vector evaluate_unchecked(const Vector& x) const override {
    Vector f(2);
    f << x[0] * x[0], (x[0] - 1.0) * (x[0] - 1.0);
    return f;
  }
  [[nodiscard]] Matrix jacobian_unchecked(const Vector& x) const override {
    Matrix j(2, 1);
    j << 2.0 * x[0], 2.0 * (x[0] - 1.0);
    return j;
  }
};

/**
 * View of a problem on the unit box: x = lower + u * (upper - lower).
 * Lets step sizes mean the same thing on every problem.
 */
class UnitBoxProblem final : public Problem {
 public:
  explicit UnitBoxProblem(ProblemPtr inner)
      : Problem(inner->name(), inner->label(), Vector::Zero(inner->n()), Vector::Ones(inner->n()), inner->m()),
        inner_(std::move(inner)),
        width_(inner_->upper() - inner_->lower()) {}

  [[nodiscard]] Vector to_inner(const Vector& u) const { return inner_->lower() + u.cwiseProduct(width_); }

  [[nodiscard]] Vector evaluate_unchecked(const Vector& u) const override {
    return inner_->evaluate_unchecked(to_inner(u));
  }
  [[nodiscard]] Matrix jacobian_unchecked(const Vector& u) const override {
    return inner_->jacobian_unchecked(to_inner(u)) * width_.asDiagonal();
  }

 private:
  ProblemPtr inner_;
  Vector width_;
};

}  // namespace stch

#endif  // STCH_PROBLEMS_PROBLEM_HPP
