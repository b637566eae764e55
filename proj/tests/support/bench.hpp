#pragma once

#include "stefan/model.hpp"

// The two benchmark problems written out by hand, independent of the presets.
namespace bench {

inline stefan::CoefficientField constant(double v) { return stefan::CoefficientField::constant(1.0, v); }

inline stefan::ModelParams spreading() {
  stefan::ModelParams p;
  p.N = 1;
  p.T = 1.0;
  p.d1 = p.d2 = 1.0;
  p.mu = 5.0;
  p.m1 = p.m2 = p.b1 = p.b2 = constant(1.0);
  p.c1 = constant(0.2);
  p.c2 = constant(0.3);
  p.init.h0 = 2.0;
  p.init.u0.shape = stefan::RadialProfile::Cosine{0.5};
  p.init.v0.shape = stefan::RadialProfile::Constant{1.0};
  return p;
}

inline stefan::ModelParams vanishing() {
  auto p = spreading();
  p.mu = 0.05;
  p.init.h0 = 0.5;
  p.init.u0.shape = stefan::RadialProfile::Cosine{0.05};
  return p;
}

// threshold family: the vanishing config with the unscaled invader profile
inline stefan::ModelParams family() {
  auto p = vanishing();
  p.mu = 1.0;
  p.init.u0.shape = stefan::RadialProfile::Cosine{0.5};
  return p;
}

}  // namespace bench
