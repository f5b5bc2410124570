// Exponent table computed by hand (exact fractions), one row per shape.
#pragma once

#include <array>

namespace fixtures {

struct ExponentRow {
  int r, s, ell;
  const char* delta;
  const char* theta0;
  const char* trivial;
  const char* main;
  const char* remainder;
  const char* case_tag;
  const char* final_exp;
  bool nontrivial;
};

inline constexpr std::array<ExponentRow, 13> kExponentTable{{
    {2, 2, 2, "0", "1/2", "3/2", "3/2", "5/4", "(i)", "3/2", false},
    {2, 3, 2, "0", "1/3", "4/3", "19/18", "5/4", "(i)", "5/4", true},
    {2, 2, 8, "0", "1/2", "9/2", "7/2", "11/4", "(i)", "7/2", true},
    {3, 5, 4, "0", "1/5", "23/15", "139/150", "73/48", "(i)", "73/48", true},
    {3, 2, 12, "0", "1/3", "9/2", "7/2", "11/3", "(i)", "11/3", true},
    {2, 8, 2, "0", "1/8", "9/8", "27/64", "1007/896", "(ii)", "1007/896", true},
    {4, 9, 16, "0", "1/9", "37/9", "28/9", "5183/1296", "(ii)", "5183/1296", true},
    {8, 2, 128, "0", "1/8", "33/2", "31/2", "263/16", "(iii)", "263/16", true},
    {9, 4, 300, "0", "1/9", "403/12", "391/12", "21731/648", "(iii)", "21731/648", true},
    {8, 8, 128, "0", "1/8", "129/8", "121/8", "14447/896", "(iv)", "14447/896", true},
    {10, 12, 600, "0", "1/12", "721/12", "709/12", "2853209/47520", "(iv)", "2853209/47520", true},
    {5, 7, 20, "1/10", "1/7", "29/7", "22/7", "1839/448", "(i)", "1839/448", true},
    {2, 3, 2, "1/2", "1/3", "4/3", "19/18", "5/4", "(i)", "14/9", false},
}};

}  // namespace fixtures
