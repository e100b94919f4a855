#include "autobias/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace autobias {

std::vector<double> BoxBounds::clamp(std::span<const double> x) const {
  std::vector<double> out(x.begin(), x.end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::min(std::max(out[i], lo[i]), hi[i]);
  }
  return out;
}

namespace {

double inf_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d = std::max(d, std::abs(a[i] - b[i]));
  }
  return d;
}

std::string point_to_string(std::span<const double> x) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) os << ", ";
    os << x[i];
  }
  os << ")";
  return os.str();
}

}  // namespace

NmSimplex::NmSimplex(std::span<const double> start,
                     std::span<const double> steps, BoxBounds bounds,
                     NmCoefficients coeffs, double stop_tol, int re_eval_every)
    : dim_(static_cast<int>(start.size())),
      bounds_(std::move(bounds)),
      coeffs_(coeffs),
      stop_tol_(stop_tol),
      re_eval_every_(re_eval_every) {
  if (steps.size() != start.size() || bounds_.lo.size() != start.size() ||
      bounds_.hi.size() != start.size()) {
    throw std::invalid_argument("simplex: dimension mismatch");
  }
  std::vector<double> origin(start.begin(), start.end());
  for (int i = 0; i < dim_; ++i) {
    if (origin[i] < bounds_.lo[i] || origin[i] > bounds_.hi[i]) {
      throw std::invalid_argument("simplex: start point out of bounds");
    }
  }
  verts_.push_back({origin, 0.0, static_cast<std::int64_t>(order_counter_++)});
  for (int i = 0; i < dim_; ++i) {
    std::vector<double> v = origin;
    v[i] += steps[i];
    v = bounds_.clamp(v);
    if (v[i] == origin[i]) {
      v[i] = origin[i] - steps[i];
      v = bounds_.clamp(v);
    }
    if (v[i] == origin[i]) {
      throw std::invalid_argument(
          std::string("simplex: degenerate initial offset for coordinate ") +
          std::to_string(i));
    }
    verts_.push_back({std::move(v), 0.0, static_cast<std::int64_t>(order_counter_++)});
  }
}

double NmSimplex::eval(const Objective& f, std::span<const double> x) {
  ++evaluations_;
  try {
    return f(x);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("objective failed at ") +
                             point_to_string(x) + ": " + e.what());
  }
}

void NmSimplex::sort_vertices() {
  std::stable_sort(verts_.begin(), verts_.end(),
                   [](const Vertex& a, const Vertex& b) {
                     if (a.value != b.value) return a.value < b.value;
                     return a.order < b.order;
                   });
}

void NmSimplex::evaluate_initial(const Objective& f) {
  for (Vertex& v : verts_) {
    v.value = eval(f, v.x);
  }
  sort_vertices();
  initial_evaluated_ = true;
}

void NmSimplex::nm_step(const Objective& f) {
  if (!initial_evaluated_) {
    throw std::logic_error("nm_step before evaluate_initial");
  }
  if (status_ != NmStatus::Running) return;

  const std::size_t n = verts_.size();
  const Vertex& best = verts_.front();
  const Vertex worst = verts_.back();
  const double second_worst_value = verts_[n - 2].value;

  std::vector<double> centroid(dim_, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (int d = 0; d < dim_; ++d) centroid[d] += verts_[i].x[d];
  }
  for (int d = 0; d < dim_; ++d) centroid[d] /= static_cast<double>(n - 1);

  auto along = [&](double t) {
    // centroid + t * (centroid - worst), clamped to the box
    std::vector<double> p(dim_);
    for (int d = 0; d < dim_; ++d) {
      p[d] = centroid[d] + t * (centroid[d] - worst.x[d]);
    }
    return bounds_.clamp(p);
  };

  auto replace_worst = [&](std::vector<double> x, double value) {
    verts_.back() = Vertex{std::move(x), value,
                           static_cast<std::int64_t>(order_counter_++)};
    sort_vertices();
  };

  std::vector<double> xr = along(coeffs_.alpha);
  const double fr = eval(f, xr);

  if (fr < best.value) {
    // Expand, keep the better of the two (greedy).
    std::vector<double> xe = along(coeffs_.alpha * coeffs_.gamma);
    const double fe = eval(f, xe);
    if (fe < fr) {
      last_displacement_ = inf_distance(xe, worst.x);
      replace_worst(std::move(xe), fe);
    } else {
      last_displacement_ = inf_distance(xr, worst.x);
      replace_worst(std::move(xr), fr);
    }
  } else if (fr < second_worst_value) {
    last_displacement_ = inf_distance(xr, worst.x);
    replace_worst(std::move(xr), fr);
  } else if (fr < worst.value) {
    // Outside contraction. The accepted point sits near the replaced vertex,
    // so the iteration's change of the operating point is measured by the
    // proposal that was attempted, not by the retreat.
    std::vector<double> xc = along(coeffs_.alpha * coeffs_.rho);
    const double fc = eval(f, xc);
    if (fc <= fr) {
      last_displacement_ = inf_distance(xr, worst.x);
      replace_worst(std::move(xc), fc);
    } else {
      shrink_toward_best(f);
    }
  } else {
    // Inside contraction. Ties accept: on plateaus this walks one vertex
    // inward per iteration instead of shrinking the whole simplex, which
    // preserves the spread of the untouched coordinates.
    std::vector<double> xc = along(-coeffs_.rho);
    const double fc = eval(f, xc);
    if (fc <= worst.value) {
      last_displacement_ = inf_distance(xr, worst.x);
      replace_worst(std::move(xc), fc);
    } else {
      shrink_toward_best(f);
    }
  }

  ++iterations_;
  if (re_eval_every_ > 0 && ++iters_since_re_eval_ >= re_eval_every_) {
    iters_since_re_eval_ = 0;
    verts_.front().value = eval(f, verts_.front().x);
    sort_vertices();
  }
  check_converged();
}

void NmSimplex::shrink_toward_best(const Objective& f) {
  const std::vector<double> best_x = verts_.front().x;
  double disp = 0.0;
  for (std::size_t i = 1; i < verts_.size(); ++i) {
    std::vector<double> x(dim_);
    for (int d = 0; d < dim_; ++d) {
      x[d] = best_x[d] + coeffs_.sigma * (verts_[i].x[d] - best_x[d]);
    }
    x = bounds_.clamp(x);
    disp = std::max(disp, inf_distance(x, verts_[i].x));
    verts_[i].x = std::move(x);
    verts_[i].value = eval(f, verts_[i].x);
    verts_[i].order = static_cast<std::int64_t>(order_counter_++);
  }
  last_displacement_ = disp;
  sort_vertices();
}

bool NmSimplex::check_converged() {
  if (iterations_ == 0) return false;
  if (last_displacement_ < stop_tol_) {
    status_ = NmStatus::Converged;
  }
  return status_ == NmStatus::Converged;
}

const std::vector<double>& NmSimplex::best_point() const {
  return verts_.front().x;
}

double NmSimplex::best_value() const { return verts_.front().value; }

std::vector<double> default_bias_steps(const BiasBounds& bounds) {
  std::vector<double> steps(kNumBiases);
  for (int i = 0; i < kNumBiases; ++i) {
    const double range = bounds[i].max - bounds[i].min;
    steps[i] = std::max(5.0, 0.05 * range);
  }
  return steps;
}

NmSimplex make_bias_simplex(const BiasVector& start, const BiasBounds& bounds,
                            std::span<const double> steps,
                            NmCoefficients coeffs, int re_eval_every) {
  bounds.require_within(start);
  std::vector<double> x0(kNumBiases), lo(kNumBiases), hi(kNumBiases);
  for (int i = 0; i < kNumBiases; ++i) {
    x0[i] = start[i];
    lo[i] = bounds[i].min;
    hi[i] = bounds[i].max;
  }
  return NmSimplex(x0, steps, BoxBounds{std::move(lo), std::move(hi)}, coeffs,
                   1.0, re_eval_every);
}

BiasVector round_to_bias(std::span<const double> x, const BiasBounds& bounds) {
  BiasVector b;
  for (int i = 0; i < kNumBiases; ++i) {
    b[i] = static_cast<int>(std::llround(x[i]));
  }
  return bounds.clamp(b);
}

BiasVector best_bias(const NmSimplex& s, const BiasBounds& bounds) {
  return round_to_bias(s.best_point(), bounds);
}

}  // namespace autobias
