// src/aligner.cc

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

#include "longalign/aligner.h"

#include <algorithm>
#include <limits>
#include <set>

#include "longalign/error.h"

namespace longalign {

namespace {

Ratio RatioFromJson(const nlohmann::json &j, const char *key, Ratio fallback) {
  if (!j.contains(key)) return fallback;
  const auto &v = j.at(key);
  if (!v.is_number()) throw Error(ErrorCode::kConfigInvalid, std::string(key) + " must be a number");
  return Ratio::FromDouble(v.get<double>());
}

bool Before(const CoarseCandidate &a, const CoarseCandidate &b) {
  auto c = a.cer <=> b.cer;
  return c != 0 ? c < 0 : a.start_idx < b.start_idx;
}

void Offer(std::vector<CoarseCandidate> *top, std::size_t k, const CoarseCandidate &c) {
  if (top->size() == k && !Before(c, top->back())) return;
  top->insert(std::upper_bound(top->begin(), top->end(), c, Before), c);
  if (top->size() > k) top->pop_back();
}

}  // namespace

void AlignerConfig::Validate() const {
  auto unit = [](const Ratio &r) { return r > Ratio{0, 1} && r <= Ratio{1, 1}; };
  if (!unit(theta)) throw Error(ErrorCode::kConfigInvalid, "theta must be in (0, 1]");
  if (!unit(coarse_gate)) throw Error(ErrorCode::kConfigInvalid, "coarse_gate must be in (0, 1]");
  if (k < 1) throw Error(ErrorCode::kConfigInvalid, "k must be at least 1");
  if (skip_high_cer_threshold < Ratio{0, 1})
    throw Error(ErrorCode::kConfigInvalid, "skip_high_cer_threshold must be non-negative");
  if (!unit(skip_stride_fraction))
    throw Error(ErrorCode::kConfigInvalid, "skip_stride_fraction must be in (0, 1]");
}

nlohmann::json AlignerConfig::ToJson() const {
  return {{"theta", theta.ToDouble()},
          {"coarse_gate", coarse_gate.ToDouble()},
          {"k", k},
          {"margin_words", margin_words},
          {"skip_high_cer_threshold", skip_high_cer_threshold.ToDouble()},
          {"skip_stride_fraction", skip_stride_fraction.ToDouble()}};
}

AlignerConfig AlignerConfig::FromJson(const nlohmann::json &j) {
  AlignerConfig c;
  c.theta = RatioFromJson(j, "theta", c.theta);
  c.coarse_gate = RatioFromJson(j, "coarse_gate", c.coarse_gate);
  c.skip_high_cer_threshold = RatioFromJson(j, "skip_high_cer_threshold", c.skip_high_cer_threshold);
  c.skip_stride_fraction = RatioFromJson(j, "skip_stride_fraction", c.skip_stride_fraction);
  c.k = j.value("k", c.k);
  c.margin_words = j.value("margin_words", c.margin_words);
  c.Validate();
  return c;
}

std::string_view MatchStageName(MatchStage s) {
  switch (s) {
    case MatchStage::kCoarseSeq: return "coarse_seq";
    case MatchStage::kCoarseGlobal: return "coarse_global";
    case MatchStage::kDefaultMatch: return "default_match";
  }
  return "unknown";
}

MatchStage MatchStageFromName(std::string_view name) {
  for (auto s : {MatchStage::kCoarseSeq, MatchStage::kCoarseGlobal, MatchStage::kDefaultMatch})
    if (MatchStageName(s) == name) return s;
  throw Error(ErrorCode::kSchemaError, "unknown match stage '" + std::string(name) + "'");
}

std::vector<CoarseCandidate> CoarseSearch(const NormText &asr, const NormText &t,
                                          std::size_t start_idx, const AlignerConfig &cfg,
                                          CoarseStats *stats) {
  if (t.empty()) throw Error(ErrorCode::kEmptyTranscript, "transcript has no tokens");
  if (start_idx > t.size())
    throw Error(ErrorCode::kOutOfRange, "coarse start beyond transcript end");
  if (asr.empty()) throw Error(ErrorCode::kEmptyReference, "ASR text is empty");
  CoarseStats local;
  if (!stats) stats = &local;
  const std::size_t T = t.size();
  const std::size_t n = asr.size();
  const std::size_t m = asr.chars.size();
  const std::u32string_view ref = asr.chars;
  if (start_idx == T) return {};

  if (T - start_idx < n) {
    ++stats->evaluated;
    return {{start_idx, T, Cer(t.window_chars(start_idx, T - start_idx), ref)}};
  }

  const std::size_t last = T - n;
  std::size_t stride = static_cast<std::size_t>(
      static_cast<__int128>(n) * cfg.skip_stride_fraction.num / cfg.skip_stride_fraction.den);
  stride = std::max<std::size_t>(1, stride);

  std::vector<CoarseCandidate> top;
  std::size_t s = start_idx;
  while (s <= last) {
    ++stats->evaluated;
    const auto window = t.window_chars(s, n);
    std::optional<CerValue> exact;
    std::size_t lower;  // lower bound on the window's distance
    if (top.size() < cfg.k) {
      exact = Cer(window, ref);
      lower = exact->distance;
    } else {
      Ratio bound = std::max(top.back().cer.ratio(), cfg.skip_high_cer_threshold);
      exact = BandedCerAtMost(window, ref, bound);
      lower = exact ? exact->distance : MaxDistanceWithin(bound, m) + 1;
    }
    if (exact) {
      if (exact->ratio() < cfg.coarse_gate) return {{s, s + n, *exact}};
      Offer(&top, cfg.k, {s, s + n, *exact});
    }
    const bool high = !exact || exact->ratio() > cfg.skip_high_cer_threshold;

    std::size_t next = s + 1;
    if (high) {
      // A skipped window q differs from window s by the characters that
      // slide out on the left and in on the right, so its distance is at
      // least lower - delta. Only windows that provably could neither pass
      // the gate nor enter the top k are skipped.
      for (std::size_t q = s + 1; q < s + stride && q <= last && top.size() == cfg.k; ++q) {
        std::size_t delta = (t.token_char_starts[q] - t.token_char_starts[s]) +
                            (t.token_char_end(q + n - 1) - t.token_char_end(s + n - 1));
        Ratio lb{static_cast<int64_t>(lower > delta ? lower - delta : 0),
                 static_cast<int64_t>(m)};
        if (lb < top.back().cer.ratio() || lb < cfg.coarse_gate) break;
        next = q + 1;
        ++stats->skipped;
      }
    }
    s = next;
  }
  return top;
}

AlignmentMatch RefinedSearch(const std::vector<CoarseCandidate> &candidates,
                             const NormText &asr, const NormText &t,
                             const AlignerConfig &cfg, MatchStage stage) {
  if (candidates.empty()) throw Error(ErrorCode::kNoCandidates, "refined search without candidates");
  if (t.empty()) throw Error(ErrorCode::kEmptyTranscript, "transcript has no tokens");
  if (asr.empty()) throw Error(ErrorCode::kEmptyReference, "ASR text is empty");
  const std::size_t T = t.size();
  const std::size_t L = asr.size();
  const std::size_t margin = cfg.margin_words;
  const std::size_t min_len = L > margin ? L - margin : 1;
  const std::size_t max_len = L + margin;
  const std::u32string_view ref = asr.chars;
  const std::size_t m = ref.size();

  std::set<std::size_t> starts;
  for (const auto &c : candidates) {
    std::size_t lo = c.start_idx > margin ? c.start_idx - margin : 0;
    std::size_t hi = std::min(T - 1, c.start_idx + margin);
    for (std::size_t s = lo; s <= hi; ++s) starts.insert(s);
  }

  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::size_t best_d = kNone, best_s = 0, best_w = 0;
  std::vector<std::size_t> prev(m + 1), cur(m + 1);
  for (std::size_t s : starts) {
    const std::size_t w_hi = std::min(max_len, T - s);
    const std::size_t w_lo = std::min(min_len, w_hi);
    const std::size_t cs = t.token_char_starts[s];
    const std::u32string_view win =
        std::u32string_view(t.chars).substr(cs, t.token_char_end(s + w_hi - 1) - cs);
    for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
    std::size_t w = w_lo;
    std::size_t probe = t.token_char_end(s + w - 1) - cs;
    for (std::size_t i = 1; i <= win.size(); ++i) {
      cur[0] = i;
      std::size_t row_min = i;
      const char32_t a = win[i - 1];
      for (std::size_t j = 1; j <= m; ++j) {
        std::size_t v = std::min(prev[j] + 1, cur[j - 1] + 1);
        v = std::min(v, prev[j - 1] + (a == ref[j - 1] ? 0 : 1));
        cur[j] = v;
        row_min = std::min(row_min, v);
      }
      std::swap(prev, cur);
      if (i == probe) {
        if (prev[m] < best_d) {
          best_d = prev[m];
          best_s = s;
          best_w = w;
        }
        if (++w > w_hi) break;
        probe = t.token_char_end(s + w - 1) - cs;
      }
      // Row minima never decrease, and later windows lose ties.
      if (best_d != kNone && row_min >= best_d) break;
    }
  }

  AlignmentMatch out;
  out.start_idx = best_s;
  out.end_idx = best_s + best_w;
  out.matched_text = WindowText(t, best_s, best_w);
  out.cer = {best_d, m};
  out.stage = stage;
  out.accepted = out.cer.ratio() <= cfg.theta;
  return out;
}

std::vector<std::optional<AlignmentMatch>> AlignSession(
    const std::vector<AsrSegment> &segments, const NormText &t, const AlignerConfig &cfg) {
  if (t.empty()) throw Error(ErrorCode::kEmptyTranscript, "transcript has no tokens");
  std::vector<std::optional<AlignmentMatch>> out;
  out.reserve(segments.size());
  std::size_t last_end_idx = 0;
  for (const auto &seg : segments) {
    if (!seg.usable()) {
      out.emplace_back();
      continue;
    }
    const NormText &asr = seg.asr_norm;
    std::optional<AlignmentMatch> match;
    auto seq = CoarseSearch(asr, t, last_end_idx, cfg);
    if (!seq.empty()) match = RefinedSearch(seq, asr, t, cfg, MatchStage::kCoarseSeq);
    if (!match || match->cer.ratio() > cfg.theta) {
      auto global = RefinedSearch(CoarseSearch(asr, t, 0, cfg), asr, t, cfg,
                                  MatchStage::kCoarseGlobal);
      if (global.cer.ratio() > cfg.theta) {
        CoarseCandidate anchor;
        anchor.start_idx = std::min(last_end_idx, t.size() - 1);
        match = RefinedSearch({anchor}, asr, t, cfg, MatchStage::kDefaultMatch);
      } else {
        match = std::move(global);
      }
    }
    match->segment_id = seg.segment_id;
    last_end_idx = match->end_idx;
    out.push_back(std::move(match));
  }
  return out;
}

}  // namespace longalign
