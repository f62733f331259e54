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

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

#include "strkit/error.hpp"
#include "strkit/manifest.hpp"

namespace strkit::review {

/// Unknown queue or item (HTTP 404).
class NotFound : public Error {
 public:
  using Error::Error;
};

/// Malformed request body (HTTP 400).
class BadRequest : public Error {
 public:
  using Error::Error;
};

struct Progress {
  std::size_t decided = 0;
  std::size_t total = 0;
};

struct QueueInfo {
  std::string id;
  Progress progress;
};

struct QueuePage {
  std::string queue_id;
  std::size_t page = 0;
  std::size_t page_size = 0;
  std::vector<ReviewItem> items;
  Progress progress;
};

struct Ack {
  DecisionRecord decision;
  /// The identical record was already logged; nothing was appended.
  bool duplicate = false;
  Progress progress;
};

/// Review queues plus an append-only decision log. The effective verdict of
/// an item is the latest record by timestamp (log order breaks ties). Reads
/// run concurrently; appends are serialized and fsync'ed before returning.
class ReviewStore {
 public:
  /// Replays `decision_log` if it exists.
  ReviewStore(std::map<std::string, std::vector<ReviewItem>> queues,
              std::filesystem::path decision_log);

  /// Every `*.jsonl` file in `dir` becomes a queue named after its stem.
  static std::map<std::string, std::vector<ReviewItem>> load_queue_dir(
      const std::filesystem::path &dir);

  std::vector<QueueInfo> list_queues() const;

  /// Zero-based page over the items that have no effective decision yet.
  QueuePage get_queue(const std::string &queue_id, std::size_t page,
                      std::size_t page_size) const;

  /// A zero timestamp is replaced by the current UTC time.
  Ack post_decision(const std::string &queue_id, DecisionRecord decision);

  /// Effective decision per decided item, in queue order.
  std::vector<DecisionRecord> export_queue(const std::string &queue_id) const;

  /// The raw log, in append order.
  std::vector<DecisionRecord> log() const;

 private:
  const std::vector<ReviewItem> &queue(const std::string &queue_id) const;
  Progress progress_locked(const std::string &queue_id) const;
  void apply(const DecisionRecord &d);

  std::map<std::string, std::vector<ReviewItem>> queues_;
  std::map<std::string, std::map<std::string, std::size_t>> item_index_;
  std::filesystem::path log_path_;
  mutable std::shared_mutex mu_;
  std::vector<DecisionRecord> log_;
  /// queue -> item -> effective decision
  std::map<std::string, std::map<std::string, DecisionRecord>> effective_;
};

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;
  /// Images under this root are served by content digest at /img/{digest}.
  std::filesystem::path image_root;
  /// Thumbnails are cached here; defaults to `<image_root>/.thumbs`.
  std::filesystem::path thumb_cache;
  /// Static single-page UI mounted at `/` when set.
  std::filesystem::path ui_root;
  unsigned workers = 1;
};

/// HTTP front end:
///   GET  /api/queues
///   GET  /api/queues/{id}?page=&size=
///   POST /api/queues/{id}/decisions
///   GET  /api/queues/{id}/export
///   GET  /img/{digest}[?thumb=1]
class ReviewServer {
 public:
  ReviewServer(ReviewStore &store, ServerOptions options);
  ~ReviewServer();

  ReviewServer(const ReviewServer &) = delete;
  ReviewServer &operator=(const ReviewServer &) = delete;

  /// Binds the configured port (0 picks a free one) and returns it.
  int bind();
  /// Serves until stop(); call bind() first.
  void listen();
  void stop();

  std::size_t indexed_images() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

Json to_json(const QueuePage &page);
Json to_json(const Progress &p);

}  // namespace strkit::review
