#pragma once

#include <string>

#include "qaff/canon.hpp"
#include "qaff/module.hpp"

namespace qaff {

// Module described by a spec string such as "W(k=1,a=u)", "Lminus(a=q^2,depth=8,buffer=6)",
// "One(n=-1)", "Tensor(W(k=1),W(k=2,a=3))" or "Twist(W(k=2),u)".
// A formal module is base(u): the spectral parameter of the outermost twist is c*u.
struct ModuleSpec {
  ModulePtr<Scalar> base;
  bool formal = false;
  std::string text;
};

struct SpecDefaults {
  int depth = 8;
  int buffer = 6;
};

ModuleSpec parse_module_spec(const std::string& text, const SpecDefaults& defaults = {});

// Scalar or c*u value; throws ParseError on anything else.
struct SpectralValue {
  Scalar c;
  bool formal = false;
};
SpectralValue parse_spectral(const std::string& text);

}  // namespace qaff
