// tests/fixtures/oracle_bridge.h

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

#ifndef LONGALIGN_TESTS_FIXTURES_ORACLE_BRIDGE_H_
#define LONGALIGN_TESTS_FIXTURES_ORACLE_BRIDGE_H_

#include <optional>
#include <vector>

#include "longalign/aligner.h"
#include "oracles/aligner_oracle.h"

namespace fixture {

inline longalign::oracle::Tokens ToOracle(const longalign::NormText &nt) {
  std::vector<std::u32string> toks;
  for (const auto &t : nt.tokens) toks.push_back(longalign::Utf8Decode(t));
  return longalign::oracle::Tokens(std::move(toks));
}

inline longalign::oracle::Params ToOracle(const longalign::AlignerConfig &c) {
  return {{c.theta.num, c.theta.den}, {c.coarse_gate.num, c.coarse_gate.den}, c.k,
          c.margin_words};
}

// True when the library and the oracle agree on every segment's span, CER,
// stage and acceptance.
inline bool SameAsOracle(const std::vector<std::optional<longalign::AlignmentMatch>> &got,
                         const std::vector<std::optional<longalign::oracle::Match>> &want) {
  using longalign::MatchStage;
  using longalign::oracle::Stage;
  if (got.size() != want.size()) return false;
  for (std::size_t i = 0; i < got.size(); ++i) {
    if (got[i].has_value() != want[i].has_value()) return false;
    if (!got[i]) continue;
    const auto &g = *got[i];
    const auto &w = *want[i];
    MatchStage ws = w.stage == Stage::kSeq      ? MatchStage::kCoarseSeq
                    : w.stage == Stage::kGlobal ? MatchStage::kCoarseGlobal
                                                : MatchStage::kDefaultMatch;
    if (g.start_idx != w.span.s || g.end_idx != w.span.e || g.cer.distance != w.span.d ||
        g.cer.denom != w.m || g.stage != ws || g.accepted != w.accepted)
      return false;
  }
  return true;
}

inline std::vector<std::optional<longalign::oracle::Match>> RunOracle(
    const std::vector<longalign::AsrSegment> &segs, const longalign::NormText &t,
    const longalign::AlignerConfig &cfg) {
  std::vector<longalign::oracle::Tokens> q;
  for (const auto &s : segs) q.push_back(ToOracle(s.asr_norm));
  return longalign::oracle::AlignSession(q, ToOracle(t), ToOracle(cfg));
}

}  // namespace fixture

#endif  // LONGALIGN_TESTS_FIXTURES_ORACLE_BRIDGE_H_
