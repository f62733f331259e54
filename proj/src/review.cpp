// Copyright (c) 2026 The strkit Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "strkit/review.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <httplib.h>

#include "strkit/digest.hpp"
#include "strkit/imaging.hpp"
#include "strkit/parallel.hpp"

namespace strkit::review {

namespace fs = std::filesystem;

namespace {

std::int64_t now_utc_seconds() {
  return std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

/// Appends one line and fsyncs before returning.
void durable_append(const fs::path &path, const std::string &line) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const int fd = ::open(path.c_str(), O_WRONLY | O_APPEND | O_CREAT, 0644);
  if (fd < 0) throw Error("cannot open decision log " + path.string());
  std::string buf = line + "\n";
  const char *p = buf.data();
  std::size_t left = buf.size();
  while (left > 0) {
    const ssize_t n = ::write(fd, p, left);
    if (n < 0) {
      ::close(fd);
      throw Error("write failure on decision log " + path.string());
    }
    p += n;
    left -= static_cast<std::size_t>(n);
  }
  const int synced = ::fsync(fd);
  ::close(fd);
  if (synced != 0) throw Error("fsync failure on decision log " + path.string());
}

bool is_image_file(const fs::path &p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".pgm" || ext == ".bmp";
}

const char *content_type(const fs::path &p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == ".png") return "image/png";
  if (ext == ".jpg" || ext == ".jpeg") return "image/jpeg";
  if (ext == ".bmp") return "image/bmp";
  return "image/x-portable-graymap";
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

Json to_json(const Progress &p) {
  Json j;
  j["decided"] = p.decided;
  j["total"] = p.total;
  return j;
}

Json to_json(const QueuePage &page) {
  Json j;
  j["queue_id"] = page.queue_id;
  j["page"] = page.page;
  j["size"] = page.page_size;
  Json items = Json::array();
  for (const ReviewItem &item : page.items) items.push_back(strkit::to_json(item));
  j["items"] = std::move(items);
  j["progress"] = to_json(page.progress);
  return j;
}

ReviewStore::ReviewStore(std::map<std::string, std::vector<ReviewItem>> queues,
                         fs::path decision_log)
    : queues_(std::move(queues)), log_path_(std::move(decision_log)) {
  for (const auto &[qid, items] : queues_) {
    auto &index = item_index_[qid];
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (items[i].reason.empty()) {
        throw Error("queue '" + qid + "' item '" + items[i].item_id + "' has no reason");
      }
      if (!index.emplace(items[i].item_id, i).second) {
        throw Error("queue '" + qid + "' repeats item '" + items[i].item_id + "'");
      }
    }
  }
  if (fs::exists(log_path_)) {
    for (const DecisionRecord &d : read_decisions(log_path_)) {
      log_.push_back(d);
      apply(d);
    }
  }
}

std::map<std::string, std::vector<ReviewItem>> ReviewStore::load_queue_dir(const fs::path &dir) {
  std::map<std::string, std::vector<ReviewItem>> out;
  if (!fs::is_directory(dir)) throw Error("queue directory " + dir.string() + " does not exist");
  for (const auto &entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl") {
      out[entry.path().stem().string()] = read_review_items(entry.path());
    }
  }
  return out;
}

void ReviewStore::apply(const DecisionRecord &d) {
  auto &per_queue = effective_[d.queue_id];
  auto it = per_queue.find(d.item_id);
  if (it == per_queue.end()) {
    per_queue.emplace(d.item_id, d);
  } else if (d.timestamp >= it->second.timestamp) {
    it->second = d;
  }
}

const std::vector<ReviewItem> &ReviewStore::queue(const std::string &queue_id) const {
  auto it = queues_.find(queue_id);
  if (it == queues_.end()) throw NotFound("unknown queue '" + queue_id + "'");
  return it->second;
}

Progress ReviewStore::progress_locked(const std::string &queue_id) const {
  const auto &items = queue(queue_id);
  Progress p;
  p.total = items.size();
  auto eff = effective_.find(queue_id);
  if (eff != effective_.end()) {
    for (const ReviewItem &item : items) p.decided += eff->second.count(item.item_id);
  }
  return p;
}

std::vector<QueueInfo> ReviewStore::list_queues() const {
  std::shared_lock lock(mu_);
  std::vector<QueueInfo> out;
  for (const auto &[qid, items] : queues_) out.push_back({qid, progress_locked(qid)});
  return out;
}

QueuePage ReviewStore::get_queue(const std::string &queue_id, std::size_t page,
                                 std::size_t page_size) const {
  std::shared_lock lock(mu_);
  const auto &items = queue(queue_id);
  if (page_size == 0) throw BadRequest("page size must be positive");
  QueuePage out;
  out.queue_id = queue_id;
  out.page = page;
  out.page_size = page_size;
  out.progress = progress_locked(queue_id);

  const auto eff = effective_.find(queue_id);
  std::vector<const ReviewItem *> pending;
  for (const ReviewItem &item : items) {
    if (eff == effective_.end() || !eff->second.count(item.item_id)) pending.push_back(&item);
  }
  const std::size_t begin = page * page_size;
  if (page_size > 0 && page > pending.size() / page_size + 1) return out;
  for (std::size_t i = begin; i < pending.size() && i < begin + page_size; ++i) {
    out.items.push_back(*pending[i]);
  }
  return out;
}

Ack ReviewStore::post_decision(const std::string &queue_id, DecisionRecord decision) {
  std::unique_lock lock(mu_);
  const auto &index = item_index_.find(queue_id);
  if (index == item_index_.end()) throw NotFound("unknown queue '" + queue_id + "'");
  if (!index->second.count(decision.item_id)) {
    throw NotFound("item '" + decision.item_id + "' is not in queue '" + queue_id + "'");
  }
  if (decision.reviewer.empty()) throw BadRequest("reviewer must be nonempty");
  if (!decision.queue_id.empty() && decision.queue_id != queue_id) {
    throw BadRequest("decision queue_id '" + decision.queue_id + "' does not match the URL");
  }
  decision.queue_id = queue_id;
  if (decision.timestamp == 0) decision.timestamp = now_utc_seconds();

  Ack ack;
  ack.decision = decision;
  const bool seen = std::any_of(log_.begin(), log_.end(),
                                [&](const DecisionRecord &d) { return d == decision; });
  if (seen) {
    ack.duplicate = true;
  } else {
    durable_append(log_path_, strkit::to_json(decision).dump());
    log_.push_back(decision);
    apply(decision);
  }
  ack.progress = progress_locked(queue_id);
  return ack;
}

std::vector<DecisionRecord> ReviewStore::export_queue(const std::string &queue_id) const {
  std::shared_lock lock(mu_);
  const auto &items = queue(queue_id);
  std::vector<DecisionRecord> out;
  auto eff = effective_.find(queue_id);
  if (eff == effective_.end()) return out;
  for (const ReviewItem &item : items) {
    auto it = eff->second.find(item.item_id);
    if (it != eff->second.end()) out.push_back(it->second);
  }
  return out;
}

std::vector<DecisionRecord> ReviewStore::log() const {
  std::shared_lock lock(mu_);
  return log_;
}

struct ReviewServer::Impl {
  ReviewStore &store;
  ServerOptions options;
  httplib::Server server;
  std::map<std::string, fs::path> images;  // digest -> path
  std::mutex thumb_mu;

  Impl(ReviewStore &s, ServerOptions o) : store(s), options(std::move(o)) {}

  void index_images() {
    if (options.image_root.empty()) return;
    std::vector<fs::path> files;
    for (const auto &entry : fs::recursive_directory_iterator(options.image_root)) {
      if (!entry.is_regular_file() || !is_image_file(entry.path())) continue;
      if (!options.thumb_cache.empty() &&
          entry.path().string().rfind(options.thumb_cache.string(), 0) == 0) {
        continue;
      }
      files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<std::string> digests(files.size());
    parallel_for(files.size(), options.workers,
                 [&](std::size_t i) { digests[i] = sha256_file(files[i]); });
    for (std::size_t i = 0; i < files.size(); ++i) images.try_emplace(digests[i], files[i]);
  }

  static void send_error(httplib::Response &res, int status, const std::string &msg) {
    Json j;
    j["error"] = msg;
    res.status = status;
    res.set_content(j.dump(), "application/json");
  }

  template <typename Fn>
  static auto guarded(Fn fn) {
    return [fn](const httplib::Request &req, httplib::Response &res) {
      try {
        fn(req, res);
      } catch (const NotFound &e) {
        send_error(res, 404, e.what());
      } catch (const BadRequest &e) {
        send_error(res, 400, e.what());
      } catch (const std::exception &e) {
        send_error(res, 500, e.what());
      }
    };
  }

  static std::size_t query_size(const httplib::Request &req, const char *key, std::size_t dflt) {
    if (!req.has_param(key)) return dflt;
    const std::string v = req.get_param_value(key);
    try {
      std::size_t used = 0;
      const long long n = std::stoll(v, &used);
      if (used != v.size() || n < 0) throw std::invalid_argument(v);
      return static_cast<std::size_t>(n);
    } catch (const std::exception &) {
      throw BadRequest(std::string("query parameter '") + key + "' must be a non-negative integer");
    }
  }

  void routes() {
    server.Get("/api/queues", guarded([this](const httplib::Request &, httplib::Response &res) {
      Json queues = Json::array();
      for (const QueueInfo &q : store.list_queues()) {
        Json j;
        j["id"] = q.id;
        j["progress"] = to_json(q.progress);
        queues.push_back(std::move(j));
      }
      Json body;
      body["queues"] = std::move(queues);
      res.set_content(body.dump(), "application/json");
    }));

    server.Get(R"(/api/queues/([^/]+)/export)",
               guarded([this](const httplib::Request &req, httplib::Response &res) {
                 std::string out;
                 for (const DecisionRecord &d : store.export_queue(req.matches[1])) {
                   out += strkit::to_json(d).dump();
                   out += '\n';
                 }
                 res.set_content(out, "application/x-ndjson");
               }));

    server.Get(R"(/api/queues/([^/]+))",
               guarded([this](const httplib::Request &req, httplib::Response &res) {
                 const QueuePage page = store.get_queue(req.matches[1], query_size(req, "page", 0),
                                                        query_size(req, "size", 20));
                 res.set_content(to_json(page).dump(), "application/json");
               }));

    server.Post(R"(/api/queues/([^/]+)/decisions)",
                guarded([this](const httplib::Request &req, httplib::Response &res) {
                  Json body;
                  try {
                    body = Json::parse(req.body);
                  } catch (const std::exception &e) {
                    throw BadRequest(std::string("body is not JSON: ") + e.what());
                  }
                  if (body.is_object() && !body.contains("timestamp")) body["timestamp"] = 0;
                  DecisionRecord d;
                  try {
                    d = decision_from_json(body);
                  } catch (const Error &e) {
                    throw BadRequest(e.what());
                  }
                  const Ack ack = store.post_decision(req.matches[1], d);
                  Json out;
                  out["ok"] = true;
                  out["duplicate"] = ack.duplicate;
                  out["decision"] = strkit::to_json(ack.decision);
                  out["progress"] = to_json(ack.progress);
                  res.set_content(out.dump(), "application/json");
                }));

    server.Get(R"(/img/([0-9a-f]{64}))",
               guarded([this](const httplib::Request &req, httplib::Response &res) {
                 const std::string digest = req.matches[1];
                 auto it = images.find(digest);
                 if (it == images.end()) throw NotFound("no image with digest " + digest);
                 if (req.has_param("thumb") && req.get_param_value("thumb") != "0") {
                   res.set_content(thumbnail(digest, it->second), "image/png");
                 } else {
                   res.set_content(slurp(it->second), content_type(it->second));
                 }
               }));

    if (!options.ui_root.empty()) server.set_mount_point("/", options.ui_root.string());
  }

  std::string thumbnail(const std::string &digest, const fs::path &source) {
    const fs::path cached = options.thumb_cache / (digest + ".png");
    std::lock_guard lock(thumb_mu);
    if (!fs::exists(cached)) {
      fs::create_directories(options.thumb_cache);
      imaging::write_png(imaging::downscale(imaging::read_image(source), 256), cached);
    }
    return slurp(cached);
  }
};

ReviewServer::ReviewServer(ReviewStore &store, ServerOptions options)
    : impl_(std::make_unique<Impl>(store, std::move(options))) {
  if (impl_->options.thumb_cache.empty() && !impl_->options.image_root.empty()) {
    impl_->options.thumb_cache = impl_->options.image_root / ".thumbs";
  }
  impl_->index_images();
  impl_->routes();
}

ReviewServer::~ReviewServer() { stop(); }

int ReviewServer::bind() {
  if (impl_->options.port == 0) {
    const int port = impl_->server.bind_to_any_port(impl_->options.host);
    if (port < 0) throw Error("cannot bind " + impl_->options.host);
    return port;
  }
  if (!impl_->server.bind_to_port(impl_->options.host, impl_->options.port)) {
    throw Error("cannot bind " + impl_->options.host + ":" + std::to_string(impl_->options.port));
  }
  return impl_->options.port;
}

void ReviewServer::listen() { impl_->server.listen_after_bind(); }

void ReviewServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

std::size_t ReviewServer::indexed_images() const { return impl_->images.size(); }

}  // namespace strkit::review
