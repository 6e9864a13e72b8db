#pragma once

// Constants shared by the scalar reference kernels and the AVX2 variants.
// Both variants must execute the same rounded operations in the same order;
// any change here changes both identically.

namespace itad::simd::detail {

inline constexpr double kLog2E = 1.4426950408889634;
// Cody-Waite split of ln(2); the hi part has 21 trailing zero bits so
// n * kLn2Hi is exact for |n| < 2^20.
inline constexpr double kLn2Hi = 6.93147180369123816490e-01;
inline constexpr double kLn2Lo = 1.90821492927058770002e-10;
inline constexpr double kExpOverflow = 709.782712893384;
inline constexpr double kExpUnderflow = -745.133219101941;

// Taylor coefficients 1/k! for exp on |r| <= ln(2)/2.
inline constexpr double kExpC2 = 0.5;
inline constexpr double kExpC3 = 0.16666666666666666;
inline constexpr double kExpC4 = 0.041666666666666664;
inline constexpr double kExpC5 = 0.008333333333333333;
inline constexpr double kExpC6 = 0.001388888888888889;
inline constexpr double kExpC7 = 0.0001984126984126984;
inline constexpr double kExpC8 = 2.48015873015873e-05;
inline constexpr double kExpC9 = 2.7557319223985893e-06;
inline constexpr double kExpC10 = 2.755731922398589e-07;
inline constexpr double kExpC11 = 2.505210838544172e-08;
inline constexpr double kExpC12 = 2.08767569878681e-09;
inline constexpr double kExpC13 = 1.6059043836821613e-10;

inline constexpr double kSqrt2 = 1.4142135623730951;

// Remez coefficients for log1p(f) on the reduced mantissa interval
// (the classic fdlibm set, accurate to ~2^-58).
inline constexpr double kLg1 = 6.666666666666735130e-01;
inline constexpr double kLg2 = 3.999999999940941908e-01;
inline constexpr double kLg3 = 2.857142874366239149e-01;
inline constexpr double kLg4 = 2.222219843214978396e-01;
inline constexpr double kLg5 = 1.818357216161805012e-01;
inline constexpr double kLg6 = 1.531383769920937332e-01;
inline constexpr double kLg7 = 1.479819860511658591e-01;

inline constexpr double kTwo54 = 1.8014398509481984e16;  // 2^54

}  // namespace itad::simd::detail
