#include "mdhv/context.hpp"

#include <cmath>
#include <cstdio>

#include "mdhv/errors.hpp"
#include "mdhv/ontic.hpp"
#include "mdhv/tolerances.hpp"

namespace mdhv {

namespace {

std::size_t prep_dim(const Preparation& p) {
  if (const auto* s = std::get_if<StateVector>(&p)) return s->dim();
  if (const auto* r = std::get_if<DensityMatrix>(&p)) return r->dim();
  return 4;
}

}  // namespace

ModelContext::ModelContext(Preparation preparation, Measurement measurement)
    : prep_(std::move(preparation)), meas_(std::move(measurement)) {
  const bool singlet = std::holds_alternative<Singlet>(prep_);
  const bool pair = std::holds_alternative<QubitPairSettings>(meas_);
  if (singlet != pair) throw ContextError("ModelContext: the singlet goes with qubit-pair settings and only with them");
  if (!pair && std::get<Povm>(meas_).dim() != prep_dim(prep_)) {
    throw DimensionError("ModelContext: preparation and measurement dimensions differ");
  }
}

ModelContext ModelContext::singlet(const BlochVector& a, const BlochVector& b) {
  return ModelContext(Singlet{}, QubitPairSettings{a, b});
}

ModelContext ModelContext::qubit(const BlochVector& state, const BlochVector& axis) {
  return ModelContext(ket_from_bloch(state), Povm::qubit_axis(axis));
}

DensityMatrix ModelContext::density_matrix() const {
  if (const auto* s = pure_state()) return s->density();
  if (const auto* r = mixed_state()) return *r;
  throw ContextError("ModelContext: the singlet tag has no single-system density matrix");
}

std::string ModelContext::describe() const {
  std::string out;
  if (is_singlet()) {
    const auto& s = *settings();
    out = "singlet a=" + s.a.to_string() + " b=" + s.b.to_string();
  } else if (const auto* psi = pure_state()) {
    out = "pure d=" + std::to_string(psi->dim());
    if (psi->dim() == 2) out += " psi=" + bloch_from_ket(*psi).to_string();
  } else {
    out = "mixed d=" + std::to_string(mixed_state()->dim());
  }
  if (const auto* m = povm()) {
    out += " M=" + std::to_string(m->size()) + "-outcome";
    out += m->is_projective() ? " projective" : " povm";
  }
  return out;
}

bool IntervalPoint::operator==(const IntervalPoint& o) const {
  if (x != o.x) return false;
  if (!preparation || !o.preparation) return !preparation && !o.preparation;
  return preparation == o.preparation ||
         (preparation->dim() == o.preparation->dim() &&
          std::abs(overlap_sq(*preparation, *o.preparation) - 1.0) <= tol::kStructural);
}

std::string describe(const OnticPoint& point) {
  struct Visitor {
    std::string operator()(const DiscreteIndex& p) const { return "lambda_" + std::to_string(p.j); }
    std::string operator()(const IntervalPoint& p) const {
      char buf[48];
      std::snprintf(buf, sizeof buf, "x=%.9g", p.x);
      return p.preparation ? std::string(buf) + " (tagged)" : std::string(buf);
    }
    std::string operator()(const SpherePoint& p) const { return "v=" + p.v.to_string(); }
    std::string operator()(const LabeledSphere& p) const {
      return "(lambda_" + std::to_string(p.k) + ", v=" + p.v.to_string() + ")";
    }
    std::string operator()(const AntipodalPair& p) const { return "(v1=" + p.first().to_string() + ", v2=-v1)"; }
    std::string operator()(const SettingsOutcomePair& p) const {
      return std::string("(") + (p.i > 0 ? "+" : "-") + "," + (p.j > 0 ? "+" : "-") + ", A=" + p.a.to_string() +
             ", B=" + p.b.to_string() + ")";
    }
  };
  return std::visit(Visitor{}, point);
}

}  // namespace mdhv
