#pragma once

#include "orbitforge/complexbox.hpp"
#include "orbitforge/rational.hpp"

namespace orbitforge {

// Transcendental kernels underlying the supported base functions. The family
// is closed under differentiation: exp stays put, the trig entries cycle.
//   0: exp   1: sin   2: cos   3: -sin   4: -cos
namespace kernel {

constexpr int EXP = 0;
constexpr int SIN = 1;
constexpr int COS = 2;
constexpr int NEG_SIN = 3;
constexpr int NEG_COS = 4;

int derivative(int id);
const char* name(int id);
int by_name(const std::string& s);

// Exact Taylor coefficient at 0.
Rational taylor(int id, long n);

ComplexBox eval(int id, const ComplexBox& z, Prec p);

// Upper bound for |kernel| on the disk; used in Cauchy derivative estimates.
BigFloat sup_on(int id, const ComplexBox& disk);

// All kernels satisfy |a_n| <= 1/n!.
Integer factorial(long n);

} // namespace kernel

} // namespace orbitforge
