#include "xwalk/sinks.hpp"

#include <regex>

#include <spdlog/spdlog.h>

#include "httplib.h"
#include "json.hpp"

#include "xwalk/config.hpp"
#include "xwalk/error.hpp"
#include "xwalk/text.hpp"

namespace xwalk {

void LogSink::on_trigger(const EventRecord& r, const WindowPolicy& policy) {
  out_ << "TRIGGER tick=" << r.tick << " t=" << format_fixed(r.time, 3)
       << " class=" << to_string(r.dominant_class.value_or(FrameClass::Pedestrian))
       << " count=" << r.positive_count << " policy=(" << policy.n << "," << policy.t << ")\n";
  out_.flush();
}

void BellSink::on_trigger(const EventRecord&, const WindowPolicy&) {
  out_ << '\a';
  out_.flush();
}

std::string webhook_body(const EventRecord& r, const WindowPolicy& policy) {
  nlohmann::json j;
  j["timestamp"] = r.wall_time;
  j["dominant_class"] = to_string(r.dominant_class.value_or(FrameClass::Pedestrian));
  j["positive_count"] = r.positive_count;
  j["policy"] = {{"n", policy.n}, {"t", policy.t}};
  return j.dump();
}

WebhookSink::WebhookSink(const std::string& url, double timeout_seconds) : timeout_seconds_(timeout_seconds) {
  static const std::regex re(R"(^http://([A-Za-z0-9.\-]+)(?::([0-9]{1,5}))?(/[^\s]*)?$)");
  std::smatch m;
  if (!is_valid_webhook_url(url) || !std::regex_match(url, m, re)) {
    throw ValidationError("malformed webhook URL '" + url + "'");
  }
  host_ = m[1].str();
  port_ = m[2].matched ? std::stoi(m[2].str()) : 80;
  path_ = m[3].matched ? m[3].str() : "/";
  thread_ = std::thread([this] { worker(); });
}

WebhookSink::~WebhookSink() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
  }
  cv_.notify_all();
  if (thread_.joinable()) thread_.join();
}

void WebhookSink::on_trigger(const EventRecord& record, const WindowPolicy& policy) {
  {
    std::lock_guard lock(mutex_);
    queue_.push_back(webhook_body(record, policy));
  }
  cv_.notify_one();
}

void WebhookSink::flush() {
  std::unique_lock lock(mutex_);
  idle_cv_.wait(lock, [this] { return queue_.empty() && !busy_; });
}

std::size_t WebhookSink::delivered() const {
  std::lock_guard lock(mutex_);
  return delivered_;
}

std::size_t WebhookSink::failed() const {
  std::lock_guard lock(mutex_);
  return failed_;
}

void WebhookSink::worker() {
  httplib::Client client(host_, port_);
  const auto timeout = std::chrono::milliseconds(static_cast<long>(timeout_seconds_ * 1000));
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);

  std::unique_lock lock(mutex_);
  while (true) {
    cv_.wait(lock, [this] { return stopping_ || !queue_.empty(); });
    if (queue_.empty()) break;  // stopping with nothing left to send
    std::string body = std::move(queue_.front());
    queue_.pop_front();
    busy_ = true;
    lock.unlock();

    auto res = client.Post(path_, body, "application/json");
    const bool ok = res && res->status >= 200 && res->status < 300;
    if (!ok) {
      spdlog::warn("webhook POST to {}:{}{} failed: {}", host_, port_, path_,
                   res ? "HTTP " + std::to_string(res->status) : httplib::to_string(res.error()));
    }

    lock.lock();
    busy_ = false;
    ++(ok ? delivered_ : failed_);
    if (queue_.empty()) idle_cv_.notify_all();
  }
  busy_ = false;
  idle_cv_.notify_all();
}

}  // namespace xwalk
