// src/fetch.cc

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

#include "longalign/fetch.h"

#include <fstream>
#include <algorithm>
#include <regex>

#include "httplib.h"
#include "longalign/error.h"
#include "longalign/subprocess.h"
#include "longalign/transcript_io.h"
#include "longalign/wav.h"

namespace longalign {

namespace fs = std::filesystem;

namespace {

const std::regex &UrlRegex() {
  static const std::regex kUrl(R"(^([A-Za-z][A-Za-z0-9+.-]*)://([^/?#]*)([^#]*))");
  return kUrl;
}

fs::path LocalPath(const std::string &url, const FetchOptions &opts) {
  fs::path p = url.rfind("file://", 0) == 0 ? fs::path(url.substr(7)) : fs::path(url);
  if (p.is_relative() && !opts.base_dir.empty()) p = opts.base_dir / p;
  return p;
}

void FetchHttp(const std::string &url, const fs::path &dest, const FetchOptions &opts) {
  std::smatch m;
  std::regex_match(url, m, std::regex(R"(^([A-Za-z][A-Za-z0-9+.-]*://[^/?#]*)([^#]*).*$)"));
  const std::string origin = m[1];
  std::string target = m[2];
  if (target.empty()) target = "/";

  httplib::Client cli(origin);
  auto secs = std::chrono::duration_cast<std::chrono::seconds>(opts.timeout).count();
  cli.set_connection_timeout(static_cast<time_t>(std::max<int64_t>(1, secs)), 0);
  cli.set_read_timeout(static_cast<time_t>(std::max<int64_t>(1, secs)), 0);
  cli.set_follow_location(true);

  fs::path part = dest;
  part += ".part";
  std::error_code ec;
  uintmax_t have = fs::exists(part) ? fs::file_size(part, ec) : 0;
  httplib::Headers headers;
  if (have > 0) headers.emplace("Range", "bytes=" + std::to_string(have) + "-");

  std::ofstream out;
  int status = 0;
  auto res = cli.Get(
      target, headers,
      [&](const httplib::Response &r) {
        status = r.status;
        if (r.status == 206 && have > 0) {
          out.open(part, std::ios::binary | std::ios::app);
        } else if (r.status == 200) {
          out.open(part, std::ios::binary | std::ios::trunc);
        } else {
          return false;
        }
        return static_cast<bool>(out);
      },
      [&](const char *data, size_t len) {
        out.write(data, static_cast<std::streamsize>(len));
        return static_cast<bool>(out);
      });
  out.close();
  if (!res) {
    if (status == 416) fs::remove(part, ec);
    throw Error(ErrorCode::kDownloadFailed,
                url + ": " + (status ? "HTTP " + std::to_string(status)
                                     : httplib::to_string(res.error())));
  }
  if (res->status != 200 && res->status != 206)
    throw Error(ErrorCode::kDownloadFailed, url + ": HTTP " + std::to_string(res->status));
  fs::rename(part, dest, ec);
  if (ec) throw Error(ErrorCode::kDownloadFailed, "cannot move " + part.string());
}

}  // namespace

HandlerKind ResolveHandler(const std::string &url, const FetchOptions &opts) {
  for (const auto &h : opts.handlers) {
    try {
      if (std::regex_search(url, std::regex(h.pattern))) return HandlerKind::kCustom;
    } catch (const std::regex_error &) {
      throw Error(ErrorCode::kConfigInvalid, "bad handler pattern '" + h.pattern + "'");
    }
  }
  std::smatch m;
  if (!std::regex_search(url, m, UrlRegex())) return HandlerKind::kFile;  // bare path
  std::string scheme = m[1];
  std::transform(scheme.begin(), scheme.end(), scheme.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (scheme == "http" || scheme == "https") return HandlerKind::kHttp;
  if (scheme == "file") return HandlerKind::kFile;
  throw Error(ErrorCode::kHandlerNotFound, "no handler for '" + url + "'");
}

void FetchUrl(const std::string &url, const fs::path &dest, const FetchOptions &opts) {
  std::error_code ec;
  fs::create_directories(dest.parent_path(), ec);
  switch (ResolveHandler(url, opts)) {
    case HandlerKind::kCustom: {
      for (const auto &h : opts.handlers) {
        if (!std::regex_search(url, std::regex(h.pattern))) continue;
        std::string cmd = ExpandCommand(h.command, {{"url", url}, {"out", dest.string()}});
        ProcessResult r = RunCommand(cmd, "", opts.timeout);
        if (!r.ok() || !fs::exists(dest))
          throw Error(ErrorCode::kDownloadFailed,
                      url + ": handler " + (r.timed_out ? "timed out" : "exited with " +
                                                              std::to_string(r.exit_code)));
        return;
      }
      break;
    }
    case HandlerKind::kHttp:
      FetchHttp(url, dest, opts);
      return;
    case HandlerKind::kFile: {
      fs::path src = LocalPath(url, opts);
      fs::path tmp = dest;
      tmp += ".part";
      fs::copy_file(src, tmp, fs::copy_options::overwrite_existing, ec);
      if (ec) throw Error(ErrorCode::kDownloadFailed, url + ": " + ec.message());
      fs::rename(tmp, dest, ec);
      if (ec) throw Error(ErrorCode::kDownloadFailed, url + ": " + ec.message());
      return;
    }
  }
}

void ConvertToWav(const fs::path &in, const fs::path &out, const std::string &command,
                  std::chrono::milliseconds timeout) {
  std::error_code ec;
  fs::create_directories(out.parent_path(), ec);
  fs::path staged = out;
  staged += ".conv.wav";
  if (!command.empty()) {
    ProcessResult r = RunCommand(
        ExpandCommand(command, {{"in", in.string()}, {"out", staged.string()}}), "", timeout);
    if (!r.ok())
      throw Error(ErrorCode::kConversionFailed,
                  r.timed_out ? "conversion timed out"
                              : "conversion exited with " + std::to_string(r.exit_code));
  } else {
    fs::copy_file(in, staged, fs::copy_options::overwrite_existing, ec);
    if (ec) throw Error(ErrorCode::kConversionFailed, ec.message());
  }
  try {
    Audio a = ReadWav(staged);
    WriteWav(out, a);
  } catch (const Error &e) {
    fs::remove(staged, ec);
    throw Error(ErrorCode::kConversionFailed, e.what());
  }
  fs::remove(staged, ec);
}

}  // namespace longalign
