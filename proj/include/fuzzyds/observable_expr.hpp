#pragma once

#include <span>
#include <string>
#include <vector>

#include "fuzzyds/cs_core.hpp"
#include "fuzzyds/expr.hpp"

namespace fuzzyds {

// Wraps a parsed expression as an Observable over a chart whose compact
// coordinates are named by angle_names (in grid order). Constants (r, Hinv,
// ...) are frozen in. Identifier use determines the dependence class, which
// the quantization loop exploits.
inline Observable make_observable(const expr::Expr &e,
                                  std::vector<std::string> angle_names,
                                  const expr::Bindings &constants) {
  bool uses_tau = false;
  bool uses_angle = false;
  for (const auto &id : expr::identifiers(e)) {
    if (id == "tau") {
      uses_tau = true;
      continue;
    }
    bool is_angle = false;
    for (const auto &a : angle_names)
      if (a == id)
        is_angle = true;
    if (is_angle) {
      uses_angle = true;
      continue;
    }
    if (!constants.get(id))
      throw expr::EvalError("unbound identifier '" + id +
                            "' for this chart");
  }

  auto evaluator = [e, names = std::move(angle_names),
                    b = constants](double tau,
                                   std::span<const double> angles) mutable {
    b.set("tau", tau);
    for (std::size_t i = 0; i < names.size() && i < angles.size(); ++i)
      b.set(names[i], angles[i]);
    return expr::eval(e, b);
  };

  if (!uses_tau && !uses_angle) {
    const double v = evaluator(0.0, {});
    return Observable::constant(v);
  }
  if (uses_tau && !uses_angle)
    return Observable::time_only(
        [ev = std::move(evaluator)](double tau) mutable { return ev(tau, {}); });
  if (!uses_tau)
    return Observable::compact_only(
        [ev = std::move(evaluator)](std::span<const double> ang) mutable {
          return cdouble(ev(0.0, ang), 0.0);
        },
        /*is_real=*/true);
  return Observable::general(std::move(evaluator));
}

} // namespace fuzzyds
