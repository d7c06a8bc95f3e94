#include "irb/operator.hpp"

#include <sstream>
#include <stdexcept>

#include "irb/parallel.hpp"

namespace irb {

namespace {

[[noreturn]] void rethrow_at(const expr::DomainError& e, const char* what, double t, double y,
                             double x) {
  std::ostringstream os;
  os.precision(17);
  os << e.what() << " while evaluating " << what << " at t = " << t << ", y = " << y
     << " (x = " << x << ")";
  throw expr::DomainError(e.node(), e.position(), os.str());
}

template <class Entry>
void flatten(std::vector<std::vector<Entry>>& rows, std::vector<std::size_t>& offsets,
             std::vector<Entry>& entries) {
  offsets.assign(rows.size() + 1, 0);
  for (std::size_t i = 0; i < rows.size(); ++i) offsets[i + 1] = offsets[i] + rows[i].size();
  entries.clear();
  entries.reserve(offsets.back());
  for (auto& row : rows) {
    entries.insert(entries.end(), row.begin(), row.end());
    row.clear();
    row.shrink_to_fit();
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// OperatorSpec

GridFunction OperatorSpec::constant(double v) const {
  return GridFunction::constant(grid_lo(), grid_hi(), static_cast<std::size_t>(n_x), v);
}

std::vector<double> OperatorSpec::grid() const { return constant(0.0).nodes(); }

void OperatorSpec::validate() const {
  if (n_t < 2) throw std::invalid_argument("operator needs n_t >= 2");
  if (n_x < 2) throw std::invalid_argument("operator needs n_x >= 2");
  if (!(inv_tol > 0.0)) throw std::invalid_argument("inversion tolerance must be positive");
  const double span = fam.domain().hi - fam.domain().lo;
  if (!(delta >= 0.0) || !(delta < span / n_x)) {
    throw std::invalid_argument("left offset delta must satisfy 0 <= delta < (b - a)/n_x");
  }
  if (q.n() != fam.n() || s.n() != fam.n()) {
    throw std::invalid_argument("q and s must be defined on the same t-range [1, n] as l");
  }
}

// ---------------------------------------------------------------------------
// IrbOperator

IrbOperator::IrbOperator(OperatorSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  const NodeTable table = make_node_table(spec_.fam, spec_.n_t);
  weight_ = table.weight;
  non_injective_ = table.non_injective;

  const std::vector<double> xs = spec_.grid();
  std::vector<std::vector<Pullback>> rows(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) {
    const double x = xs[i];
    auto& row = rows[i];
    for (int j = 0; j < table.n_t; ++j) {
      const double t = table.t[j];
      const Inversion inv = spec_.fam.invert(table.shape[j], t, x, spec_.inv_tol);
      if (inv.status != InvertStatus::ok) continue;
      Pullback p{inv.y, 0.0, 0.0};
      try {
        p.q = spec_.q(t, inv.y);
      } catch (const expr::DomainError& e) {
        rethrow_at(e, "q", t, inv.y, x);
      }
      try {
        p.s = spec_.s(t, inv.y);
      } catch (const expr::DomainError& e) {
        rethrow_at(e, "s", t, inv.y, x);
      }
      row.push_back(p);
    }
  });
  flatten(rows, offsets_, entries_);
}

GridFunction IrbOperator::apply(const GridFunction& f) const {
  if (f.size() != static_cast<std::size_t>(spec_.n_x) || f.lo() != spec_.grid_lo() ||
      f.hi() != spec_.grid_hi()) {
    throw std::invalid_argument("apply_irb: function is not on the operator grid");
  }
  std::vector<double> out(f.size(), 0.0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    double acc = 0.0;
    for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) {
      const Pullback& p = entries_[k];
      acc += weight_ * (p.q + p.s * f.at_clamped(p.y));
    }
    out[i] = acc;
  }
  return GridFunction(f.lo(), f.hi(), std::move(out));
}

GridFunction apply_irb(const OperatorSpec& spec, const GridFunction& f) {
  return IrbOperator(spec).apply(f);
}

// ---------------------------------------------------------------------------
// RbOperator

void BaseTriple::validate() const {
  if (l.size() < 2) throw std::invalid_argument("RB triple needs n >= 2 maps");
  if (q.size() != l.size() || s.size() != l.size()) {
    throw std::invalid_argument("RB triple lists must have equal length");
  }
  for (const auto* list : {&l, &q, &s}) {
    for (const auto& e : *list) {
      if (expr::depends_on(e, expr::Var::t)) {
        throw std::invalid_argument("RB parameter '" + expr::to_string(e) +
                                    "' must depend on x only");
      }
    }
  }
}

RbOperator::RbOperator(BaseTriple base, Interval domain, double grid_lo, std::size_t n_x)
    : base_(std::move(base)), domain_(domain), grid_lo_(grid_lo), n_x_(n_x) {
  base_.validate();
  if (n_x_ < 2) throw std::invalid_argument("RB operator needs n_x >= 2");
  if (!(grid_lo_ >= domain_.lo && grid_lo_ < domain_.hi)) {
    throw std::invalid_argument("RB operator grid must start inside the domain");
  }

  std::vector<MapFamily> maps;
  std::vector<NodeShape> shapes;
  for (const auto& li : base_.l) {
    maps.emplace_back(FunctionFamily::direct(li, 2), domain_, 0);
    shapes.push_back(maps.back().shape(1.0));
    if (shapes.back().direction == Monotonicity::non_monotone) throw NonInjectiveError(1.0);
  }

  const std::vector<double> xs = zero().nodes();
  std::vector<std::vector<Pullback>> rows(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) {
    const double x = xs[i];
    for (std::size_t m = 0; m < maps.size(); ++m) {
      const Inversion inv = maps[m].invert(shapes[m], 1.0, x, 1e-12);
      if (inv.status != InvertStatus::ok) continue;
      rows[i].push_back({inv.y, expr::eval(base_.q[m], 1.0, inv.y), expr::eval(base_.s[m], 1.0, inv.y)});
    }
  });
  flatten(rows, offsets_, entries_);
}

GridFunction RbOperator::zero() const {
  return GridFunction::constant(grid_lo_, domain_.hi, n_x_, 0.0);
}

GridFunction RbOperator::apply(const GridFunction& f) const {
  if (f.size() != n_x_ || f.lo() != grid_lo_ || f.hi() != domain_.hi) {
    throw std::invalid_argument("apply_rb: function is not on the operator grid");
  }
  std::vector<double> out(f.size(), 0.0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    double acc = 0.0;
    for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) {
      const Pullback& p = entries_[k];
      acc += p.q + p.s * f.at_clamped(p.y);
    }
    out[i] = acc;
  }
  return GridFunction(f.lo(), f.hi(), std::move(out));
}

GridFunction apply_rb(const BaseTriple& base, Interval domain, const GridFunction& f) {
  return RbOperator(base, domain, f.lo(), f.size()).apply(f);
}

}  // namespace irb
