// src/job_store.cc

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

#include "longalign/job_store.h"

#include <fcntl.h>
#include <signal.h>
#include <sys/file.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <fstream>
#include <sstream>

#include "longalign/error.h"

namespace longalign {

namespace {

constexpr JobState kStates[] = {JobState::kPending,     JobState::kDownloading, JobState::kDownloaded,
                                JobState::kSegmented,   JobState::kTranscribed, JobState::kAligned,
                                JobState::kSelected,    JobState::kEmitted,     JobState::kFailed};

JobState JobStateFromName(std::string_view name) {
  for (auto s : kStates)
    if (JobStateName(s) == name) return s;
  throw Error(ErrorCode::kStoreCorrupt, "unknown job state '" + std::string(name) + "'");
}

std::string HostName() {
  char buf[256] = {};
  if (gethostname(buf, sizeof(buf) - 1) != 0) return "localhost";
  return buf;
}

// True when owner names a process on this host that has exited.
bool OwnerIsDead(const std::string &owner) {
  auto a = owner.find(':');
  if (a == std::string::npos) return false;
  auto b = owner.find(':', a + 1);
  if (owner.substr(0, a) != HostName()) return false;
  std::string pid_s = owner.substr(a + 1, b == std::string::npos ? std::string::npos : b - a - 1);
  char *end = nullptr;
  long pid = std::strtol(pid_s.c_str(), &end, 10);
  if (pid <= 0 || *end != '\0') return false;
  return ::kill(static_cast<pid_t>(pid), 0) != 0 && errno == ESRCH;
}

class LockFile {
 public:
  explicit LockFile(const std::filesystem::path &p) {
    fd_ = ::open(p.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ < 0) throw Error(ErrorCode::kIoError, "cannot open lock " + p.string());
    while (::flock(fd_, LOCK_EX) != 0) {
      if (errno != EINTR) {
        ::close(fd_);
        throw Error(ErrorCode::kIoError, "cannot lock " + p.string());
      }
    }
  }
  ~LockFile() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  LockFile(const LockFile &) = delete;
  LockFile &operator=(const LockFile &) = delete;

 private:
  int fd_ = -1;
};

}  // namespace

std::string_view JobStateName(JobState s) {
  switch (s) {
    case JobState::kPending: return "pending";
    case JobState::kDownloading: return "downloading";
    case JobState::kDownloaded: return "downloaded";
    case JobState::kSegmented: return "segmented";
    case JobState::kTranscribed: return "transcribed";
    case JobState::kAligned: return "aligned";
    case JobState::kSelected: return "selected";
    case JobState::kEmitted: return "emitted";
    case JobState::kFailed: return "failed";
  }
  return "failed";
}

std::string_view StageName(Stage s) {
  switch (s) {
    case Stage::kFetch: return "fetch";
    case Stage::kSegment: return "segment";
    case Stage::kTranscribe: return "transcribe";
    case Stage::kAlign: return "align";
    case Stage::kSelect: return "select";
    case Stage::kEmit: return "emit";
  }
  return "fetch";
}

const std::vector<Stage> &AllStages() {
  static const std::vector<Stage> kAll = {Stage::kFetch, Stage::kSegment, Stage::kTranscribe,
                                          Stage::kAlign, Stage::kSelect,  Stage::kEmit};
  return kAll;
}

Stage StageFromName(std::string_view name) {
  for (auto s : AllStages())
    if (StageName(s) == name) return s;
  throw Error(ErrorCode::kConfigInvalid, "unknown stage '" + std::string(name) + "'");
}

JobState StageInput(Stage s) {
  switch (s) {
    case Stage::kFetch: return JobState::kPending;
    case Stage::kSegment: return JobState::kDownloaded;
    case Stage::kTranscribe: return JobState::kSegmented;
    case Stage::kAlign: return JobState::kTranscribed;
    case Stage::kSelect: return JobState::kAligned;
    case Stage::kEmit: return JobState::kSelected;
  }
  return JobState::kPending;
}

JobState StageOutput(Stage s) {
  switch (s) {
    case Stage::kFetch: return JobState::kDownloaded;
    case Stage::kSegment: return JobState::kSegmented;
    case Stage::kTranscribe: return JobState::kTranscribed;
    case Stage::kAlign: return JobState::kAligned;
    case Stage::kSelect: return JobState::kSelected;
    case Stage::kEmit: return JobState::kEmitted;
  }
  return JobState::kEmitted;
}

int StateRank(JobState s) {
  return s == JobState::kFailed ? -1 : static_cast<int>(s);
}

nlohmann::json JobRecord::ToJson() const {
  nlohmann::json j = {{"session", session.ToJson()},
                      {"state", JobStateName(state)},
                      {"failure_reason", failure_reason},
                      {"attempts", attempts},
                      {"permanent_failure", permanent_failure},
                      {"lease_owner", lease_owner},
                      {"lease_expires_ms", lease_expires_ms},
                      {"not_before_ms", not_before_ms},
                      {"checksums", checksums}};
  j["failed_stage"] = failed_stage ? nlohmann::json(StageName(*failed_stage)) : nlohmann::json();
  j["attempt_stage"] = attempt_stage ? nlohmann::json(StageName(*attempt_stage)) : nlohmann::json();
  return j;
}

JobRecord JobRecord::FromJson(const nlohmann::json &j) {
  JobRecord r;
  r.session = SessionRecord::FromJson(j.at("session"));
  r.state = JobStateFromName(j.at("state").get<std::string>());
  if (!j.at("failed_stage").is_null()) r.failed_stage = StageFromName(j["failed_stage"].get<std::string>());
  if (!j.at("attempt_stage").is_null()) r.attempt_stage = StageFromName(j["attempt_stage"].get<std::string>());
  r.failure_reason = j.at("failure_reason").get<std::string>();
  r.attempts = j.at("attempts").get<int>();
  r.permanent_failure = j.at("permanent_failure").get<bool>();
  r.lease_owner = j.at("lease_owner").get<std::string>();
  r.lease_expires_ms = j.at("lease_expires_ms").get<int64_t>();
  r.not_before_ms = j.at("not_before_ms").get<int64_t>();
  r.checksums = j.at("checksums").get<std::map<std::string, std::string>>();
  return r;
}

FileJobStore::FileJobStore(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (!std::filesystem::is_directory(dir_))
    throw Error(ErrorCode::kIoError, "cannot create store directory " + dir_.string());
}

void FileJobStore::Transact(const std::function<bool(Jobs &)> &fn) {
  LockFile lock(dir_ / "LOCK");
  const auto path = dir_ / "jobs.json";
  Jobs jobs;
  if (std::filesystem::exists(path)) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      auto j = nlohmann::json::parse(ss.str());
      if (j.at("version").get<int>() != 1) throw Error(ErrorCode::kStoreCorrupt, "unknown version");
      for (const auto &r : j.at("jobs")) jobs.push_back(JobRecord::FromJson(r));
    } catch (const nlohmann::json::exception &e) {
      throw Error(ErrorCode::kStoreCorrupt, path.string() + ": " + e.what());
    } catch (const Error &e) {
      throw Error(ErrorCode::kStoreCorrupt, path.string() + ": " + e.what());
    }
  }
  if (!fn(jobs)) return;
  nlohmann::json out = {{"version", 1}, {"jobs", nlohmann::json::array()}};
  for (const auto &r : jobs) out["jobs"].push_back(r.ToJson());
  auto tmp = dir_ / ("jobs.json.tmp." + std::to_string(::getpid()));
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    f << out.dump(1) << "\n";
    f.flush();
    if (!f) throw Error(ErrorCode::kWriteFailed, "cannot write " + tmp.string());
  }
  int fd = ::open(tmp.c_str(), O_RDONLY | O_CLOEXEC);
  if (fd >= 0) {
    ::fsync(fd);
    ::close(fd);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::kWriteFailed, "cannot replace " + path.string());
}

std::size_t FileJobStore::Upsert(const std::vector<SessionRecord> &sessions) {
  std::size_t added = 0;
  Transact([&](Jobs &jobs) {
    for (const auto &s : sessions) {
      bool known = false;
      for (const auto &r : jobs) known |= r.session.session_id == s.session_id;
      if (known) continue;
      JobRecord r;
      r.session = s;
      jobs.push_back(std::move(r));
      ++added;
    }
    return added > 0;
  });
  return added;
}

std::vector<JobRecord> FileJobStore::List() {
  Jobs out;
  Transact([&](Jobs &jobs) {
    out = jobs;
    return false;
  });
  return out;
}

std::optional<JobRecord> FileJobStore::Get(const std::string &session_id) {
  for (auto &r : List())
    if (r.session.session_id == session_id) return r;
  return std::nullopt;
}

std::optional<JobRecord> FileJobStore::ClaimNext(Stage stage, const std::string &owner,
                                                 const ClaimPolicy &policy, int64_t now_ms) {
  std::optional<JobRecord> claimed;
  Transact([&](Jobs &jobs) {
    for (auto &r : jobs) {
      if (r.leased()) continue;
      if (!policy.sessions.empty() && !policy.sessions.count(r.session.session_id)) continue;
      const bool fresh = r.state == StageInput(stage);
      const bool retry = r.state == JobState::kFailed && r.failed_stage == stage &&
                         !r.permanent_failure && r.attempts < policy.max_retries &&
                         r.not_before_ms <= now_ms;
      if (!fresh && !retry) continue;
      if (r.attempt_stage != stage) {
        r.attempt_stage = stage;
        r.attempts = 0;
      }
      ++r.attempts;
      r.state = stage == Stage::kFetch ? JobState::kDownloading : StageInput(stage);
      r.failed_stage.reset();
      r.lease_owner = owner;
      r.lease_expires_ms = now_ms + policy.lease_ms;
      claimed = r;
      return true;
    }
    return false;
  });
  return claimed;
}

bool FileJobStore::Complete(const std::string &session_id, Stage stage, const std::string &owner,
                            const std::map<std::string, std::string> &checksums) {
  bool ok = false;
  Transact([&](Jobs &jobs) {
    for (auto &r : jobs) {
      if (r.session.session_id != session_id) continue;
      if (r.lease_owner != owner) return false;
      r.state = StageOutput(stage);
      r.lease_owner.clear();
      r.lease_expires_ms = 0;
      r.failure_reason.clear();
      r.failed_stage.reset();
      r.not_before_ms = 0;
      for (const auto &[k, v] : checksums) r.checksums[k] = v;
      ok = true;
      return true;
    }
    return false;
  });
  return ok;
}

bool FileJobStore::Fail(const std::string &session_id, Stage stage, const std::string &owner,
                        const std::string &reason, bool permanent, int64_t retry_at_ms) {
  bool ok = false;
  Transact([&](Jobs &jobs) {
    for (auto &r : jobs) {
      if (r.session.session_id != session_id) continue;
      if (r.lease_owner != owner) return false;
      r.state = JobState::kFailed;
      r.failed_stage = stage;
      r.failure_reason = reason;
      r.permanent_failure = permanent;
      r.not_before_ms = retry_at_ms;
      r.lease_owner.clear();
      r.lease_expires_ms = 0;
      ok = true;
      return true;
    }
    return false;
  });
  return ok;
}

std::size_t FileJobStore::HealStale(int64_t now_ms) {
  std::size_t healed = 0;
  Transact([&](Jobs &jobs) {
    for (auto &r : jobs) {
      if (!r.leased()) continue;
      if (r.lease_expires_ms > now_ms && !OwnerIsDead(r.lease_owner)) continue;
      r.lease_owner.clear();
      r.lease_expires_ms = 0;
      if (r.state == JobState::kDownloading) r.state = JobState::kPending;
      ++healed;
    }
    return healed > 0;
  });
  return healed;
}

std::string MakeLeaseOwner(const std::string &tag) {
  return HostName() + ":" + std::to_string(::getpid()) + ":" + tag;
}

int64_t NowMs() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

}  // namespace longalign
