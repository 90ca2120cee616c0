#pragma once

// Sign constants of the commutator recursions for the Drinfeld generators.
// Fixed by the calibration tests in tests/test_borelrep.cpp.
namespace qaff::conventions {

// x^-_{r+1} = sigma [h_1, x^-_r] / [2]
inline constexpr int xminus_step = -1;
// x^+_{m+1} = sigma [h_1, x^+_m] / [2]
inline constexpr int xplus_step = +1;
// x^+_{-m-1} = sigma [h_{-1}, x^+_{-m}] / [2]
inline constexpr int xplus_neg_step = +1;
// x^-_{-m-1} = sigma [h_{-1}, x^-_{-m}] / [2]
inline constexpr int xminus_neg_step = -1;

}  // namespace qaff::conventions
