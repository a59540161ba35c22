#pragma once

#include <ctime>
#include <regex>
#include <string>

#include <fmt/format.h>

#include "e2etune/error.hpp"
#include "httplib.h"

namespace e2etune {

class Transport {
 public:
  virtual ~Transport() = default;
  /// POST the body, return the response body. Throws ServiceError.
  virtual std::string post(const std::string& body) = 0;
};

class HttpTransport : public Transport {
 public:
  /// url: http://host[:port][/path]
  explicit HttpTransport(const std::string& url, double timeout_seconds = 30.0) : timeout_(timeout_seconds) {
    static const std::regex url_re(R"(^(https?://[^/]+)(/.*)?$)");
    std::smatch m;
    if (!std::regex_match(url, m, url_re)) throw InvalidArgument("bad remote url " + url);
    base_ = m[1].str();
    path_ = m[2].matched ? m[2].str() : "/";
  }

  std::string post(const std::string& body) override {
    httplib::Client cli(base_);
    const auto secs = static_cast<time_t>(timeout_);
    cli.set_connection_timeout(secs, 0);
    cli.set_read_timeout(secs, 0);
    cli.set_write_timeout(secs, 0);
    auto res = cli.Post(path_, body, "application/json");
    if (!res) throw ServiceError("remote " + base_ + path_ + ": " + httplib::to_string(res.error()));
    if (res->status != 200) throw ServiceError(fmt::format("remote {}{}: HTTP {}", base_, path_, res->status));
    return res->body;
  }

 private:
  std::string base_;
  std::string path_;
  double timeout_;
};

}  // namespace e2etune
