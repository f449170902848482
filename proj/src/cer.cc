// src/cer.cc

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

#include "longalign/cer.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <vector>

#include "longalign/error.h"
#include "longalign/textnorm.h"

namespace longalign {

namespace {

// Common prefixes and suffixes never contribute to the distance.
void TrimCommonAffixes(std::u32string_view *a, std::u32string_view *b) {
  std::size_t p = 0;
  while (p < a->size() && p < b->size() && (*a)[p] == (*b)[p]) ++p;
  a->remove_prefix(p);
  b->remove_prefix(p);
  std::size_t s = 0;
  while (s < a->size() && s < b->size() &&
         (*a)[a->size() - 1 - s] == (*b)[b->size() - 1 - s])
    ++s;
  a->remove_suffix(s);
  b->remove_suffix(s);
}

}  // namespace

Ratio Ratio::FromDouble(double v) {
  if (!(v >= 0) || !std::isfinite(v)) return {0, 1};
  int64_t num = std::llround(v * 1e6);
  int64_t den = 1000000;
  int64_t g = std::gcd(num, den);
  return {num / g, den / g};
}

std::optional<std::size_t> BoundedEditDistance(std::u32string_view a,
                                               std::u32string_view b,
                                               std::size_t max_distance) {
  TrimCommonAffixes(&a, &b);
  if (a.size() < b.size()) std::swap(a, b);  // b is the shorter one
  const std::size_t n = a.size(), m = b.size();
  if (n - m > max_distance) return std::nullopt;
  if (m == 0) return n;
  const std::size_t k = std::min(max_distance, n);
  const std::size_t kInf = std::numeric_limits<std::size_t>::max() / 2;

  // Row i holds D[i][j] for j in [i-k, i+k]; cells outside the band are kInf.
  std::vector<std::size_t> prev(m + 1, kInf), cur(m + 1, kInf);
  for (std::size_t j = 0; j <= std::min(m, k); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    const std::size_t lo = i > k ? i - k : 0;
    const std::size_t hi = std::min(m, i + k);
    if (lo > hi) return std::nullopt;
    if (lo > 0) cur[lo - 1] = kInf;
    std::size_t row_min = kInf;
    for (std::size_t j = lo; j <= hi; ++j) {
      std::size_t v;
      if (j == 0) {
        v = i;
      } else {
        v = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
        v = std::min(v, cur[j - 1] + 1);
        v = std::min(v, prev[j] + 1);
      }
      cur[j] = v;
      row_min = std::min(row_min, v);
    }
    if (hi < m) cur[hi + 1] = kInf;
    if (row_min > max_distance) return std::nullopt;
    std::swap(prev, cur);
  }
  if (prev[m] > max_distance) return std::nullopt;
  return prev[m];
}

std::size_t EditDistance(std::u32string_view a, std::u32string_view b) {
  TrimCommonAffixes(&a, &b);
  std::size_t lo = a.size() > b.size() ? a.size() - b.size() : b.size() - a.size();
  std::size_t hi = std::max(a.size(), b.size());
  // Doubling band; the distance never exceeds the longer length.
  for (std::size_t k = std::max<std::size_t>(lo, 8);; k *= 2) {
    k = std::min(k, hi);
    if (auto d = BoundedEditDistance(a, b, k)) return *d;
  }
}

std::size_t MaxDistanceWithin(Ratio bound, std::size_t denom) {
  if (bound.num <= 0) return 0;
  __int128 v = static_cast<__int128>(bound.num) * static_cast<__int128>(denom) / bound.den;
  if (v > static_cast<__int128>(std::numeric_limits<std::size_t>::max() / 4))
    return std::numeric_limits<std::size_t>::max() / 4;
  return static_cast<std::size_t>(v);
}

CerValue Cer(std::u32string_view window, std::u32string_view reference) {
  if (reference.empty())
    throw Error(ErrorCode::kEmptyReference, "CER reference text is empty");
  return {EditDistance(window, reference), reference.size()};
}

CerValue Cer(std::string_view window_utf8, std::string_view reference_utf8) {
  return Cer(Utf8Decode(window_utf8), Utf8Decode(reference_utf8));
}

std::optional<CerValue> BandedCerAtMost(std::u32string_view window,
                                        std::u32string_view reference, Ratio bound) {
  if (reference.empty())
    throw Error(ErrorCode::kEmptyReference, "CER reference text is empty");
  auto d = BoundedEditDistance(window, reference,
                               MaxDistanceWithin(bound, reference.size()));
  if (!d) return std::nullopt;
  return CerValue{*d, reference.size()};
}

std::string FormatRatio(const Ratio &r) {
  // round half up at 1e-6 using integers only
  __int128 scaled = (static_cast<__int128>(r.num) * 2000000 + r.den) / (2 * r.den);
  long long whole = static_cast<long long>(scaled / 1000000);
  long long frac = static_cast<long long>(scaled % 1000000);
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%lld.%06lld", whole, frac);
  return buf;
}

std::string FormatCer(const CerValue &cer) { return FormatRatio(cer.ratio()); }

}  // namespace longalign
