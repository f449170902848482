// include/longalign/cer.h

// Copyright 2026  longalign authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef LONGALIGN_CER_H_
#define LONGALIGN_CER_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace longalign {

// Exact non-negative rational used for every CER threshold so comparisons
// never depend on float rounding.
struct Ratio {
  int64_t num = 0;
  int64_t den = 1;

  // Rounds to the nearest millionth, then reduces.
  static Ratio FromDouble(double v);
  double ToDouble() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend std::strong_ordering operator<=>(const Ratio &a, const Ratio &b) {
    __int128 l = static_cast<__int128>(a.num) * b.den;
    __int128 r = static_cast<__int128>(b.num) * a.den;
    return l < r ? std::strong_ordering::less
                 : (l > r ? std::strong_ordering::greater : std::strong_ordering::equal);
  }
  friend bool operator==(const Ratio &a, const Ratio &b) { return (a <=> b) == 0; }
};

struct CerValue {
  std::size_t distance = 0;
  std::size_t denom = 1;

  Ratio ratio() const {
    return {static_cast<int64_t>(distance), static_cast<int64_t>(denom)};
  }
  double value() const { return ratio().ToDouble(); }

  // Ordered by value only; 1/2 and 2/4 compare equal.
  friend std::strong_ordering operator<=>(const CerValue &a, const CerValue &b) {
    return a.ratio() <=> b.ratio();
  }
  friend bool operator==(const CerValue &a, const CerValue &b) {
    return a.ratio() == b.ratio();
  }
};

// Levenshtein distance over code points.
std::size_t EditDistance(std::u32string_view a, std::u32string_view b);

// Banded distance: the exact distance when it is <= max_distance, otherwise
// nullopt. Cost is O(min(|a|,|b|) * max_distance).
std::optional<std::size_t> BoundedEditDistance(std::u32string_view a,
                                               std::u32string_view b,
                                               std::size_t max_distance);

// distance(window, reference) / |reference|. Throws kEmptyReference.
CerValue Cer(std::u32string_view window, std::u32string_view reference);
CerValue Cer(std::string_view window_utf8, std::string_view reference_utf8);

// Exact CER when it is <= bound, nullopt ("above bound") otherwise.
std::optional<CerValue> BandedCerAtMost(std::u32string_view window,
                                        std::u32string_view reference, Ratio bound);

// Largest distance d with d / denom <= bound.
std::size_t MaxDistanceWithin(Ratio bound, std::size_t denom);

// Decimal rendering with six places, rounded half up ("0.428571").
std::string FormatCer(const CerValue &cer);
std::string FormatRatio(const Ratio &r);

}  // namespace longalign

#endif  // LONGALIGN_CER_H_
