// include/longalign/job_store.h

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

#ifndef LONGALIGN_JOB_STORE_H_
#define LONGALIGN_JOB_STORE_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "longalign/links_csv.h"

namespace longalign {

enum class JobState {
  kPending,
  kDownloading,
  kDownloaded,
  kSegmented,
  kTranscribed,
  kAligned,
  kSelected,
  kEmitted,
  kFailed,
};

enum class Stage { kFetch, kSegment, kTranscribe, kAlign, kSelect, kEmit };

std::string_view JobStateName(JobState s);
std::string_view StageName(Stage s);
// Throws kConfigInvalid.
Stage StageFromName(std::string_view name);
const std::vector<Stage> &AllStages();

// State a session must be in before the stage may run, and the state the
// stage leaves behind.
JobState StageInput(Stage s);
JobState StageOutput(Stage s);
// Position in the stage order; kFailed has none.
int StateRank(JobState s);

struct JobRecord {
  SessionRecord session;
  JobState state = JobState::kPending;
  std::optional<Stage> failed_stage;
  std::string failure_reason;
  // Claims of attempt_stage so far.
  std::optional<Stage> attempt_stage;
  int attempts = 0;
  bool permanent_failure = false;
  std::string lease_owner;
  int64_t lease_expires_ms = 0;
  int64_t not_before_ms = 0;
  std::map<std::string, std::string> checksums;

  bool leased() const { return !lease_owner.empty(); }
  nlohmann::json ToJson() const;
  static JobRecord FromJson(const nlohmann::json &j);
};

struct ClaimPolicy {
  int max_retries = 3;
  int64_t lease_ms = 600000;
  // Only these sessions, when non-empty.
  std::set<std::string> sessions;
};

// Shared by all workers; every method is one atomic transaction.
class JobStore {
 public:
  virtual ~JobStore() = default;

  // Adds unseen sessions as pending; known ones are left alone. Returns the
  // number added.
  virtual std::size_t Upsert(const std::vector<SessionRecord> &sessions) = 0;
  virtual std::vector<JobRecord> List() = 0;
  virtual std::optional<JobRecord> Get(const std::string &session_id) = 0;

  // Leases one runnable session: in the stage's input state, or failed at
  // this stage with retries left and backoff elapsed.
  virtual std::optional<JobRecord> ClaimNext(Stage stage, const std::string &owner,
                                             const ClaimPolicy &policy, int64_t now_ms) = 0;

  // Both return false when the caller no longer holds the lease.
  virtual bool Complete(const std::string &session_id, Stage stage, const std::string &owner,
                        const std::map<std::string, std::string> &checksums) = 0;
  virtual bool Fail(const std::string &session_id, Stage stage, const std::string &owner,
                    const std::string &reason, bool permanent, int64_t retry_at_ms) = 0;

  // Drops expired leases, and leases of local processes that no longer
  // exist. Returns the number healed.
  virtual std::size_t HealStale(int64_t now_ms) = 0;
};

// jobs.json under a directory, guarded by flock on LOCK and replaced by
// atomic rename. Fails closed with kStoreCorrupt on unreadable state.
class FileJobStore : public JobStore {
 public:
  explicit FileJobStore(std::filesystem::path dir);

  std::size_t Upsert(const std::vector<SessionRecord> &sessions) override;
  std::vector<JobRecord> List() override;
  std::optional<JobRecord> Get(const std::string &session_id) override;
  std::optional<JobRecord> ClaimNext(Stage stage, const std::string &owner,
                                     const ClaimPolicy &policy, int64_t now_ms) override;
  bool Complete(const std::string &session_id, Stage stage, const std::string &owner,
                const std::map<std::string, std::string> &checksums) override;
  bool Fail(const std::string &session_id, Stage stage, const std::string &owner,
            const std::string &reason, bool permanent, int64_t retry_at_ms) override;
  std::size_t HealStale(int64_t now_ms) override;

  const std::filesystem::path &dir() const { return dir_; }

 private:
  using Jobs = std::vector<JobRecord>;
  // Runs fn under the lock; writes back when it returns true.
  void Transact(const std::function<bool(Jobs &)> &fn);

  std::filesystem::path dir_;
};

// "<host>:<pid>:<tag>", the form HealStale understands.
std::string MakeLeaseOwner(const std::string &tag);

int64_t NowMs();

}  // namespace longalign

#endif  // LONGALIGN_JOB_STORE_H_
