#pragma once

#include <functional>
#include <span>
#include <vector>

#include "autobias/bias.hpp"

namespace autobias {

/// Objective oracle. Receives a point already projected into the bounds box;
/// returns the value to minimize. May throw; the error propagates out of
/// nm_step with the candidate point attached to the message.
using Objective = std::function<double(std::span<const double>)>;

struct NmCoefficients {
  double alpha = 1.0;  // reflection
  double gamma = 2.0;  // expansion
  double rho = 0.5;    // contraction
  double sigma = 0.5;  // shrink
};

struct BoxBounds {
  std::vector<double> lo;
  std::vector<double> hi;

  std::vector<double> clamp(std::span<const double> x) const;
};

enum class NmStatus { Running, Converged };

/// Bounded Nelder-Mead simplex over an n-dimensional box.
///
/// Vertices are kept sorted by objective value ascending, ties broken by
/// insertion order. Every candidate is clamped to the box before evaluation,
/// so the oracle only ever sees feasible points. Convergence is judged on the
/// accepted vertex displacement of the most recent iteration: every moved
/// coordinate must change by less than the stop tolerance.
class NmSimplex {
 public:
  struct Vertex {
    std::vector<double> x;
    double value = 0.0;
    // Tie key: initial vertices count up from 0, replacements count down
    // from -1 (newer replacements sort better among equal values).
    std::int64_t order = 0;
  };

  /// re_eval_every > 0 refreshes the best vertex's value with a new oracle
  /// call every that-many iterations; off by default (each evaluation is
  /// expensive), worth enabling on noisy objectives so a lucky sample
  /// cannot hold the best slot indefinitely.
  NmSimplex(std::span<const double> start, std::span<const double> steps,
            BoxBounds bounds, NmCoefficients coeffs = {},
            double stop_tol = 1.0, int re_eval_every = 0);

  int dim() const { return dim_; }
  NmStatus status() const { return status_; }
  int iterations() const { return iterations_; }
  int evaluations() const { return evaluations_; }
  double last_displacement() const { return last_displacement_; }

  // Vertices sorted best-first. Values are valid once evaluate_initial ran.
  const std::vector<Vertex>& vertices() const { return verts_; }

  bool initial_evaluated() const { return initial_evaluated_; }

  /// Evaluates all initial vertices. Must be called once before nm_step.
  void evaluate_initial(const Objective& f);

  /// One Nelder-Mead iteration (reflection / expansion / contraction /
  /// shrink). Updates the convergence status afterwards.
  void nm_step(const Objective& f);

  /// True once the last accepted move was below the stop tolerance in every
  /// coordinate.
  bool check_converged();

  const std::vector<double>& best_point() const;
  double best_value() const;

 private:
  double eval(const Objective& f, std::span<const double> x);
  void shrink_toward_best(const Objective& f);
  void sort_vertices();

  int dim_;
  BoxBounds bounds_;
  NmCoefficients coeffs_;
  double stop_tol_;
  std::vector<Vertex> verts_;
  std::uint64_t order_counter_ = 0;
  std::int64_t replacement_counter_ = -1;
  int re_eval_every_ = 0;
  int iters_since_re_eval_ = 0;
  NmStatus status_ = NmStatus::Running;
  int iterations_ = 0;
  int evaluations_ = 0;
  double last_displacement_ = 1e300;  // no proposal accepted yet
  bool initial_evaluated_ = false;
};

/// Default per-register initial offset: max(5, 5% of the register range).
std::vector<double> default_bias_steps(const BiasBounds& bounds);

/// Builds a simplex over the 5-dimensional bias box. Vertex 0 is the start
/// point; vertex i offsets one register, flipping the offset direction when
/// clamping would collapse it onto the start. Throws if the start is out of
/// bounds or a vertex stays degenerate after the flip.
NmSimplex make_bias_simplex(const BiasVector& start, const BiasBounds& bounds,
                            std::span<const double> steps,
                            NmCoefficients coeffs = {}, int re_eval_every = 0);

/// Integer rounding of the best vertex, clamped to bounds.
BiasVector best_bias(const NmSimplex& s, const BiasBounds& bounds);

BiasVector round_to_bias(std::span<const double> x, const BiasBounds& bounds);

}  // namespace autobias
