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

#include "strkit/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <unordered_map>

#include <CLI11.hpp>

#include "strkit/adapters.hpp"
#include "strkit/benchmark.hpp"
#include "strkit/consolidate.hpp"
#include "strkit/difficulty.hpp"
#include "strkit/digest.hpp"
#include "strkit/imaging.hpp"
#include "strkit/metrics.hpp"
#include "strkit/parallel.hpp"
#include "strkit/review.hpp"
#include "strkit/text.hpp"
#include "strkit/voting.hpp"

namespace strkit::cli {

namespace fs = std::filesystem;

namespace {

struct Globals {
  std::uint64_t seed = 0;
  bool seed_given = false;
  unsigned workers = 1;
  bool dry_run = false;
};

/// Every file-producing call goes through here so --dry-run writes nothing.
class Sink {
 public:
  Sink(bool dry, std::ostream &out) : dry_(dry), out_(out) {}

  void dir(const fs::path &p) {
    if (!dry_ && !p.empty()) fs::create_directories(p);
  }
  void corpus(std::span<const TextInstance> rows, const fs::path &p) {
    if (dry_) {
      for (const TextInstance &inst : rows) {
        auto v = validate(inst);
        if (!v.empty()) throw Error("instance '" + inst.id + "': " + v.front().field + " " + v.front().rule);
      }
      note(p, rows.size());
      return;
    }
    parent(p);
    write_corpus(rows, p);
  }
  void jsonl(std::span<const Json> rows, const fs::path &p) {
    if (dry_) return note(p, rows.size());
    parent(p);
    write_jsonl(p, rows);
  }
  void json(const Json &doc, const fs::path &p) {
    if (dry_) return note(p, 1);
    parent(p);
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    f << doc.dump(2) << '\n';
    if (!f) throw Error("cannot write " + p.string());
  }
  void png(const imaging::RasterImage &img, const fs::path &p) {
    if (dry_) return;
    parent(p);
    imaging::write_png(img, p);
  }

 private:
  void parent(const fs::path &p) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
  }
  void note(const fs::path &p, std::size_t n) {
    out_ << "dry-run: would write " << n << " record(s) to " << p.string() << '\n';
  }

  bool dry_;
  std::ostream &out_;
};

/// Sidecar written next to every stage output.
Json provenance(const std::string &stage, const Globals &g,
                const std::vector<fs::path> &inputs, Json params) {
  Json j;
  j["stage"] = stage;
  j["seed"] = g.seed;
  Json in = Json::array();
  for (const fs::path &p : inputs) {
    Json e;
    e["path"] = p.string();
    e["sha256"] = sha256_file(p);
    in.push_back(std::move(e));
  }
  j["inputs"] = std::move(in);
  j["params"] = std::move(params);
  return j;
}

fs::path prov_path(const fs::path &out) { return fs::path(out.string() + ".prov.json"); }

fs::path drops_default(const fs::path &out) {
  return out.parent_path() / (out.stem().string() + ".drops.jsonl");
}

std::string sanitize(const std::string &id) {
  std::string s;
  for (char c : id) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    s += ok ? c : '_';
  }
  return s + "_" + sha256_hex(id).substr(0, 10) + ".png";
}

std::vector<TextInstance> load_corpus(const fs::path &p) { return read_corpus(p).records; }

std::vector<Json> drops_json(const std::vector<consolidate::Dropped> &dropped) {
  std::vector<Json> rows;
  for (const auto &d : dropped) rows.push_back(consolidate::drop_to_json(d));
  return rows;
}

/// Digest for each distinct image_ref, computed in parallel.
void attach_digests(std::vector<TextInstance> &instances, const fs::path &image_dir,
                    unsigned workers) {
  std::vector<std::string> refs;
  for (const TextInstance &inst : instances) refs.push_back(inst.image_ref);
  std::sort(refs.begin(), refs.end());
  refs.erase(std::unique(refs.begin(), refs.end()), refs.end());
  std::vector<std::string> digests(refs.size());
  parallel_for(refs.size(), workers, [&](std::size_t i) {
    const fs::path p = image_dir / refs[i];
    if (!fs::is_regular_file(p)) throw Error("image " + p.string() + " not found");
    digests[i] = sha256_file(p);
  });
  std::unordered_map<std::string, std::string> by_ref;
  for (std::size_t i = 0; i < refs.size(); ++i) by_ref[refs[i]] = digests[i];
  for (TextInstance &inst : instances) inst.image_digest = by_ref.at(inst.image_ref);
}

std::vector<PredictionManifest> load_manifests(const std::vector<std::string> &files) {
  std::vector<PredictionManifest> all;
  std::set<std::string> seen;
  for (const std::string &f : files) {
    for (PredictionManifest &m : read_predictions(f)) {
      if (!seen.insert(m.model_id).second) {
        throw UsageError("model '" + m.model_id + "' appears in more than one predictions file");
      }
      all.push_back(std::move(m));
    }
  }
  return all;
}

std::set<std::string> read_id_list(const fs::path &p) {
  std::ifstream in(p);
  if (!in) throw Error("cannot open " + p.string());
  std::set<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    line = text::encode_utf8(text::trim(text::decode_utf8(line)));
    if (!line.empty() && line[0] != '#') ids.insert(line);
  }
  return ids;
}

std::string percent(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << v;
  return s.str();
}

void print_levels(std::span<const TextInstance> corpus, std::ostream &out) {
  const auto counts = difficulty::level_counts(corpus);
  const auto dist = difficulty::level_distribution(corpus);
  out << "level        count  fraction\n";
  for (Difficulty d : kAllDifficulties) {
    out << std::left << std::setw(12) << to_string(d) << std::right << std::setw(6)
        << counts.at(d) << "  " << std::fixed << std::setprecision(4) << dist.at(d) << '\n';
  }
}

// ---- stages ----------------------------------------------------------------

struct IngestOpts {
  std::string format, gt, images, dataset, out;
};

int do_ingest(const IngestOpts &o, const Globals &g, Sink &sink, std::ostream &out) {
  std::vector<TextInstance> instances =
      o.format == "icdar" ? adapters::import_icdar(o.gt, o.images, o.dataset)
                          : adapters::import_coco_text(o.gt, o.dataset);
  attach_digests(instances, o.images, g.workers);
  sink.corpus(instances, o.out);
  Json params;
  params["format"] = o.format;
  params["dataset"] = o.dataset;
  params["count"] = instances.size();
  sink.json(provenance("ingest", g, {}, params), prov_path(o.out));
  out << "ingested " << instances.size() << " instances\n";
  return 0;
}

struct CropOpts {
  std::string in, images, out_dir, out, mode = "axis";
};

int do_crop(const CropOpts &o, const Globals &g, Sink &sink, std::ostream &out) {
  std::vector<TextInstance> corpus = load_corpus(o.in);
  const imaging::CropMode mode =
      o.mode == "rotated" ? imaging::CropMode::kRotated : imaging::CropMode::kAxisAligned;

  std::map<std::string, std::vector<std::size_t>> by_image;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (!corpus[i].ignored) by_image[corpus[i].image_ref].push_back(i);
  }
  std::vector<const std::pair<const std::string, std::vector<std::size_t>> *> groups;
  for (const auto &kv : by_image) groups.push_back(&kv);

  sink.dir(o.out_dir);
  std::vector<std::string> refs(corpus.size());
  parallel_for(groups.size(), g.workers, [&](std::size_t gi) {
    const auto &[image_ref, members] = *groups[gi];
    const imaging::RasterImage img = imaging::read_image(fs::path(o.images) / image_ref);
    for (std::size_t idx : members) {
      const std::string name = sanitize(corpus[idx].id);
      sink.png(imaging::crop_polygon(img, corpus[idx].polygon, mode), fs::path(o.out_dir) / name);
      refs[idx] = name;
    }
  });
  std::size_t cropped = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (!refs[i].empty()) {
      corpus[i].crop_ref = refs[i];
      ++cropped;
    }
  }
  sink.corpus(corpus, o.out);
  Json params;
  params["mode"] = o.mode;
  params["crops"] = cropped;
  sink.json(provenance("crop", g, {o.in}, params), prov_path(o.out));
  out << "cropped " << cropped << " of " << corpus.size() << " instances (" << o.mode << ")\n";
  return 0;
}

struct FilterOpts {
  std::string in, out, drops, charset = "default";
};

int do_filter(const FilterOpts &o, const Globals &g, Sink &sink, std::ostream &out) {
  const consolidate::Charset charset = consolidate::Charset::by_name(o.charset);
  const std::vector<TextInstance> corpus = load_corpus(o.in);
  const consolidate::Partition part = consolidate::apply_filters(corpus, charset);
  const fs::path drops = o.drops.empty() ? drops_default(o.out) : fs::path(o.drops);
  sink.corpus(part.kept, o.out);
  sink.jsonl(drops_json(part.dropped), drops);
  Json params;
  params["charset"] = charset.name();
  params["kept"] = part.kept.size();
  params["dropped"] = part.dropped.size();
  sink.json(provenance("filter", g, {o.in}, params), prov_path(o.out));
  out << "kept " << part.kept.size() << ", dropped " << part.dropped.size() << '\n';
  return 0;
}

struct DedupOpts {
  std::string in, out, drops, reference_ids;
};

int do_dedup(const DedupOpts &o, const Globals &g, Sink &sink, std::ostream &out) {
  const std::vector<TextInstance> corpus = load_corpus(o.in);
  consolidate::Partition exact = consolidate::dedup_exact(corpus);
  std::set<std::string> reference;
  std::vector<fs::path> inputs{o.in};
  if (!o.reference_ids.empty()) {
    reference = read_id_list(o.reference_ids);
    inputs.push_back(o.reference_ids);
  }
  consolidate::Partition by_source = consolidate::dedup_by_source_id(exact.kept, reference);
  std::vector<consolidate::Dropped> dropped = std::move(exact.dropped);
  for (auto &d : by_source.dropped) dropped.push_back(std::move(d));

  const fs::path drops = o.drops.empty() ? drops_default(o.out) : fs::path(o.drops);
  sink.corpus(by_source.kept, o.out);
  sink.jsonl(drops_json(dropped), drops);
  Json params;
  params["kept"] = by_source.kept.size();
  params["dropped"] = dropped.size();
  sink.json(provenance("dedup", g, inputs, params), prov_path(o.out));
  out << "kept " << by_source.kept.size() << ", removed " << dropped.size() << '\n';
  return 0;
}

struct VoteOpts {
  std::vector<std::string> detections;
  std::string out, dataset = "pseudo", images;
  double iou = 0.7;
  bool allow_partial = false;
};

int do_vote(const VoteOpts &o, const Globals &g, Sink &sink, std::ostream &out) {
  if (o.detections.size() < 2) {
    throw UsageError("vote needs at least two detection files, one per detector");
  }
  voting::ConsensusConfig cfg;
  cfg.iou_threshold = o.iou;
  cfg.require_all_detectors = !o.allow_partial;
  cfg.validate();

  // detector index -> image_ref -> regions
  std::vector<std::string> detector_ids;
  std::vector<std::map<std::string, std::vector<geometry::Polygon>>> per_detector;
  std::set<std::string> images;
  for (const std::string &file : o.detections) {
    auto rows = read_detections(file).records;
    if (rows.empty()) throw Error(file + " holds no detections");
    const std::string id = rows.front().detector_id;
    if (std::find(detector_ids.begin(), detector_ids.end(), id) != detector_ids.end()) {
      throw UsageError("detector '" + id + "' is given twice");
    }
    std::map<std::string, std::vector<geometry::Polygon>> regions;
    for (auto &r : rows) {
      if (r.detector_id != id) {
        throw Error(file + " mixes detectors '" + id + "' and '" + r.detector_id + "'");
      }
      auto &dst = regions[r.image_ref];
      for (auto &p : r.regions) dst.push_back(std::move(p));
      images.insert(r.image_ref);
    }
    detector_ids.push_back(id);
    per_detector.push_back(std::move(regions));
  }

  const std::vector<std::string> image_list(images.begin(), images.end());
  std::vector<std::vector<TextInstance>> slots(image_list.size());
  parallel_for(image_list.size(), g.workers, [&](std::size_t i) {
    std::vector<DetectionSet> sets;
    for (std::size_t d = 0; d < detector_ids.size(); ++d) {
      DetectionSet s;
      s.detector_id = detector_ids[d];
      s.image_ref = image_list[i];
      auto it = per_detector[d].find(image_list[i]);
      if (it != per_detector[d].end()) s.regions = it->second;
      sets.push_back(std::move(s));
    }
    const auto regions = voting::harvest(sets, cfg);
    slots[i] = voting::to_instances(regions, o.dataset);
  });
  std::vector<TextInstance> harvested;
  for (auto &s : slots) {
    for (auto &inst : s) harvested.push_back(std::move(inst));
  }
  if (!o.images.empty()) attach_digests(harvested, o.images, g.workers);

  sink.corpus(harvested, o.out);
  Json params;
  params["iou_threshold"] = o.iou;
  params["require_all_detectors"] = !o.allow_partial;
  params["regions"] = harvested.size();
  std::vector<fs::path> inputs(o.detections.begin(), o.detections.end());
  sink.json(provenance("vote", g, inputs, params), prov_path(o.out));
  out << "harvested " << harvested.size() << " pseudo-labeled regions from "
      << image_list.size() << " images\n";
  return 0;
}

struct DifficultyOpts {
  std::string in, out, mode = "waics", report;
  std::vector<std::string> predictions;
};

int do_difficulty(const DifficultyOpts &o, const Globals &g, Sink &sink, std::ostream &out) {
  const metrics::NormalizationMode mode = metrics::parse_mode(o.mode);
  std::vector<TextInstance> corpus = load_corpus(o.in);
  const std::vector<PredictionManifest> manifests = load_manifests(o.predictions);

  std::vector<std::size_t> labeled_idx;
  std::vector<TextInstance> labeled;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (!corpus[i].ignored && !corpus[i].label.empty()) {
      labeled_idx.push_back(i);
      labeled.push_back(corpus[i]);
    }
  }
  std::vector<TextInstance> graded =
      difficulty::assign_difficulty(labeled, manifests, mode, g.workers);
  for (std::size_t k = 0; k < labeled_idx.size(); ++k) corpus[labeled_idx[k]] = std::move(graded[k]);

  sink.corpus(corpus, o.out);
  std::vector<fs::path> inputs{o.in};
  inputs.insert(inputs.end(), o.predictions.begin(), o.predictions.end());
  Json params;
  params["mode"] = std::string(metrics::to_string(mode));
  params["models"] = manifests.size();
  params["graded"] = labeled.size();
  sink.json(provenance("difficulty", g, inputs, params), prov_path(o.out));

  std::vector<TextInstance> levelled;
  for (std::size_t k : labeled_idx) levelled.push_back(corpus[k]);
  if (!levelled.empty()) {
    print_levels(levelled, out);
    if (!o.report.empty()) {
      Json rep = Json::object();
      for (const auto &[d, f] : difficulty::level_distribution(levelled)) {
        rep[std::string(to_string(d))] = f;
      }
      sink.json(rep, o.report);
    }
  }
  return 0;
}

struct EvaluateOpts {
  std::vector<std::string> gt, predictions, subsets;
  std::string mode = "waics", incomplete, out;
};

int do_evaluate(const EvaluateOpts &o, const Globals &g, Sink &sink, std::ostream &out) {
  const metrics::NormalizationMode mode = metrics::parse_mode(o.mode);
  std::map<std::string, std::string> gt;
  for (const std::string &f : o.gt) {
    for (const TextInstance &inst : load_corpus(f)) {
      if (inst.ignored || inst.label.empty()) continue;
      if (!gt.emplace(inst.id, inst.label).second) {
        throw Error("ground-truth id '" + inst.id + "' appears twice");
      }
    }
  }
  if (gt.empty()) throw Error("no labeled ground truth in the given files");

  auto restrict_to = [&](const std::vector<std::string> &ids, const std::string &what) {
    std::map<std::string, std::string> sub;
    for (const std::string &id : ids) {
      auto it = gt.find(id);
      if (it == gt.end()) throw Error(what + " lists '" + id + "' which has no ground truth");
      sub.insert(*it);
    }
    return sub;
  };

  std::vector<std::pair<std::string, std::map<std::string, std::string>>> subsets;
  std::vector<fs::path> inputs(o.gt.begin(), o.gt.end());
  for (const std::string &spec : o.subsets) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
      throw UsageError("--subset expects name=path, got '" + spec + "'");
    }
    const std::string name = spec.substr(0, eq);
    const fs::path path = spec.substr(eq + 1);
    subsets.emplace_back(name, restrict_to(benchmark::read_subset_ids(path), "subset " + name));
    inputs.push_back(path);
  }
  if (subsets.empty()) subsets.emplace_back("all", gt);

  std::map<std::string, std::string> full_gt, cropped_gt;
  if (!o.incomplete.empty()) {
    std::vector<std::string> originals, mutated;
    std::vector<LineIssue> issues;
    for_each_record(o.incomplete, ReadMode::kStrict, issues, [&](std::size_t, const Json &j) {
      if (!j.contains("id") || !j.contains("original_id")) {
        throw Error("pair line needs 'id' and 'original_id'");
      }
      mutated.push_back(j["id"].get<std::string>());
      originals.push_back(j["original_id"].get<std::string>());
    });
    full_gt = restrict_to(originals, "pairs file");
    cropped_gt = restrict_to(mutated, "pairs file");
    inputs.push_back(o.incomplete);
  }

  const std::vector<PredictionManifest> manifests = load_manifests(o.predictions);
  inputs.insert(inputs.end(), o.predictions.begin(), o.predictions.end());

  std::vector<std::pair<std::string, metrics::MetricReport>> rows;
  Json models = Json::array();
  for (const PredictionManifest &m : manifests) {
    std::vector<std::pair<std::string, double>> acc;
    for (const auto &[name, sub] : subsets) {
      if (sub.empty()) throw Error("subset '" + name + "' is empty");
      acc.emplace_back(name, metrics::word_accuracy(m, sub, mode));
    }
    metrics::MetricReport r = metrics::aggregate_report(std::move(acc));
    if (!full_gt.empty()) {
      r.incomplete_margin = metrics::incomplete_margin(metrics::word_accuracy(m, full_gt, mode),
                                                       metrics::word_accuracy(m, cropped_gt, mode));
    }
    Json mj;
    mj["model_id"] = m.model_id;
    mj["report"] = metrics::to_json(r);
    models.push_back(std::move(mj));
    rows.emplace_back(m.model_id, std::move(r));
  }

  out << metrics::render_table(rows);
  if (!o.out.empty()) {
    Json doc;
    doc["mode"] = std::string(metrics::to_string(mode));
    doc["models"] = std::move(models);
    doc["provenance"] = provenance("evaluate", g, inputs, Json::object());
    sink.json(doc, o.out);
  }
  return 0;
}

struct AssembleOpts {
  std::string spec, corpus, out_dir;
  std::vector<std::string> decisions;
};

int do_assemble(const AssembleOpts &o, const Globals &g, Sink &sink, std::ostream &out) {
  benchmark::BenchmarkSpec spec = benchmark::load_spec(o.spec);
  for (const std::string &d : o.decisions) spec.decision_files.emplace_back(d);
  if (g.seed_given) {
    for (auto &s : spec.subsets) {
      if (!s.seed && s.source != benchmark::SubsetSource::kReviewed) s.seed = g.seed;
    }
  }
  spec.validate();

  const std::vector<TextInstance> corpus = load_corpus(o.corpus);
  std::vector<DecisionRecord> decisions;
  benchmark::AssembleInputs in;
  for (const fs::path &f : spec.decision_files) {
    for (DecisionRecord &d : read_decisions(f)) decisions.push_back(std::move(d));
    in.decision_digests[f.string()] = sha256_file(f);
  }
  for (const auto &s : spec.subsets) {
    if (s.source == benchmark::SubsetSource::kReviewed) {
      in.candidates[s.name] = read_review_items(s.candidates);
    }
  }
  in.corpus = corpus;
  in.decisions = decisions;

  benchmark::AssembleResult res = benchmark::assemble(spec, in);
  const fs::path dir = o.out_dir;
  sink.dir(dir);
  for (const auto &m : res.subsets) {
    if (m.name.find('/') != std::string::npos || m.name == "train") {
      throw UsageError("subset name '" + m.name + "' cannot be used as an output file name");
    }
  }
  for (const auto &m : res.subsets) {
    std::vector<Json> rows;
    for (const std::string &id : m.ids) {
      Json j;
      j["subset"] = m.name;
      j["id"] = id;
      rows.push_back(std::move(j));
    }
    sink.jsonl(rows, dir / (m.name + ".jsonl"));
    out << std::left << std::setw(16) << m.name << m.ids.size() << '\n';
  }
  sink.corpus(res.train, dir / "train.jsonl");
  res.provenance["seed"] = g.seed;
  res.provenance["spec_sha256"] = sha256_file(o.spec);
  res.provenance["corpus_sha256"] = sha256_file(o.corpus);
  sink.json(res.provenance, dir / "provenance.json");
  out << std::left << std::setw(16) << "train" << res.train.size() << '\n';
  return 0;
}

struct MutateOpts {
  std::string corpus, subset, crops, images, out_dir;
  std::size_t count = 0;
};

int do_mutate(const MutateOpts &o, const Globals &g, Sink &sink, std::ostream &out) {
  const std::vector<TextInstance> corpus = load_corpus(o.corpus);
  std::vector<std::string> ids;
  if (!o.subset.empty()) {
    ids = benchmark::read_subset_ids(o.subset);
  } else if (o.count > 0) {
    ids = benchmark::select_mutation_candidates(corpus, o.count, g.seed).ids;
  } else {
    throw UsageError("mutate-incomplete needs --subset or --count");
  }

  std::unordered_map<std::string, const TextInstance *> by_id;
  for (const TextInstance &inst : corpus) by_id[inst.id] = &inst;
  std::vector<benchmark::MutationInput> inputs(ids.size());
  parallel_for(ids.size(), g.workers, [&](std::size_t i) {
    auto it = by_id.find(ids[i]);
    if (it == by_id.end()) throw Error("id '" + ids[i] + "' is not in the corpus");
    const TextInstance &inst = *it->second;
    inputs[i].instance = inst;
    if (inst.crop_ref && !o.crops.empty()) {
      inputs[i].image = imaging::read_image(fs::path(o.crops) / *inst.crop_ref);
    } else if (!o.images.empty()) {
      inputs[i].image = imaging::crop_polygon(imaging::read_image(fs::path(o.images) / inst.image_ref),
                                              inst.polygon, imaging::CropMode::kAxisAligned);
    } else {
      throw UsageError("instance '" + inst.id + "' needs --crops (with a crop_ref) or --images");
    }
  });

  benchmark::MutationResult res = benchmark::mutate_incomplete(inputs, g.seed, g.workers);
  const fs::path dir = o.out_dir;
  sink.dir(dir / "images");
  std::vector<TextInstance> mutated;
  std::vector<Json> pairs;
  for (benchmark::Mutated &m : res.mutated) {
    const std::string rel = "images/" + sanitize(m.instance.id);
    sink.png(m.image, dir / rel);
    m.instance.crop_ref = rel;
    Json p;
    p["id"] = m.instance.id;
    p["original_id"] = m.original_id;
    p["side"] = std::string(imaging::to_string(m.side));
    pairs.push_back(std::move(p));
    mutated.push_back(std::move(m.instance));
  }
  std::vector<Json> skipped;
  for (const auto &s : res.skipped) {
    Json j;
    j["id"] = s.id;
    j["reason"] = s.reason;
    skipped.push_back(std::move(j));
  }
  sink.corpus(mutated, dir / "incomplete.jsonl");
  sink.jsonl(pairs, dir / "pairs.jsonl");
  if (!skipped.empty()) sink.jsonl(skipped, dir / "skipped.jsonl");
  std::vector<fs::path> prov_inputs{o.corpus};
  if (!o.subset.empty()) prov_inputs.push_back(o.subset);
  Json params;
  params["mutated"] = mutated.size();
  params["skipped"] = skipped.size();
  sink.json(provenance("mutate-incomplete", g, prov_inputs, params),
            dir / "incomplete.jsonl.prov.json");
  out << "mutated " << mutated.size() << ", skipped " << skipped.size() << '\n';
  return 0;
}

struct StatsOpts {
  std::string in, json;
};

int do_stats(const StatsOpts &o, const Globals &, Sink &sink, std::ostream &out) {
  const std::vector<TextInstance> corpus = load_corpus(o.in);
  const consolidate::CorpusSummary s = consolidate::summarize(corpus);
  out << consolidate::render_summary(s);
  const bool levelled =
      !corpus.empty() && std::all_of(corpus.begin(), corpus.end(),
                                     [](const TextInstance &i) { return i.difficulty.has_value(); });
  Json doc = consolidate::to_json(s);
  if (levelled) {
    print_levels(corpus, out);
    Json dist = Json::object();
    for (const auto &[d, f] : difficulty::level_distribution(corpus)) {
      dist[std::string(to_string(d))] = f;
    }
    doc["level_distribution"] = std::move(dist);
  }
  if (!o.json.empty()) sink.json(doc, o.json);
  return 0;
}

struct ScopeOpts {
  std::int64_t total = 0, errors = 0, mislabeled = 0, unrecognizable = 0;
};

int do_scope(const ScopeOpts &o, std::ostream &out) {
  const metrics::SaturationScope s =
      metrics::saturation_scope(o.total, o.errors, o.mislabeled, o.unrecognizable);
  auto bound = [](const metrics::ScopeBound &b) {
    Json j;
    j["count"] = b.count;
    j["percent"] = b.percent;
    j["headline_percent"] = b.headline_percent;
    return j;
  };
  Json j;
  j["max_scope"] = bound(s.max_scope);
  j["min_scope"] = bound(s.min_scope);
  out << j.dump(2) << '\n';
  out << "max " << s.max_scope.count << " (" << percent(s.max_scope.headline_percent) << "%), min "
      << s.min_scope.count << " (" << percent(s.min_scope.headline_percent) << "%)\n";
  return 0;
}

struct CollisionOpts {
  std::string corpus, bench, out, mode = "waic";
};

int do_collisions(const CollisionOpts &o, const Globals &, Sink &sink, std::ostream &out) {
  const auto corpus = load_corpus(o.corpus);
  const auto bench = load_corpus(o.bench);
  const auto items =
      consolidate::list_label_collisions(corpus, bench, metrics::parse_mode(o.mode));
  std::vector<Json> rows;
  for (const ReviewItem &item : items) rows.push_back(to_json(item));
  sink.jsonl(rows, o.out);
  out << items.size() << " label collisions queued for review\n";
  return 0;
}

struct ServeOpts {
  std::string queues, decisions, images, ui, thumbs, host = "127.0.0.1";
  int port = 8080;
};

int do_serve(const ServeOpts &o, const Globals &g, std::ostream &out) {
  review::ReviewStore store(review::ReviewStore::load_queue_dir(o.queues), o.decisions);
  review::ServerOptions opts;
  opts.host = o.host;
  opts.port = o.port;
  opts.image_root = o.images;
  opts.ui_root = o.ui;
  opts.thumb_cache = o.thumbs;
  opts.workers = g.workers;
  review::ReviewServer server(store, opts);
  const int port = server.bind();
  out << "serving " << store.list_queues().size() << " queue(s) and " << server.indexed_images()
      << " image(s) on http://" << o.host << ":" << port << std::endl;
  if (g.dry_run) return 0;
  server.listen();
  return 0;
}

}  // namespace

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  CLI::App app{"Scene-text corpus curation and benchmark toolkit", "strkit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML or INI file with option values; sections per subcommand")
      ->envname("STRKIT_CONFIG");

  Globals g;
  app.add_option("--seed", g.seed, "Global seed")->envname("STRKIT_SEED");
  app.add_option("--workers", g.workers, "Worker threads")
      ->envname("STRKIT_WORKERS")
      ->check(CLI::Range(1u, 1024u));
  app.add_flag("--dry-run", g.dry_run, "Validate inputs without writing anything")
      ->envname("STRKIT_DRY_RUN");

  const auto existing = CLI::ExistingFile;
  const auto existing_dir = CLI::ExistingDirectory;
  const auto existing_path = CLI::ExistingPath;

  IngestOpts ingest;
  auto *s_ingest = app.add_subcommand("ingest", "Import ICDAR or COCO-Text annotations");
  s_ingest->add_option("--format", ingest.format)->required()->check(CLI::IsMember({"icdar", "coco"}));
  s_ingest->add_option("--gt", ingest.gt, "gt_*.txt directory or COCO-Text JSON")->required()->check(existing_path);
  s_ingest->add_option("--images", ingest.images)->required()->check(existing_dir);
  s_ingest->add_option("--dataset", ingest.dataset)->required();
  s_ingest->add_option("--out", ingest.out)->required();

  CropOpts crop;
  auto *s_crop = app.add_subcommand("crop", "Cut every instance out of its source image");
  s_crop->add_option("--in", crop.in)->required()->check(existing);
  s_crop->add_option("--images", crop.images)->required()->check(existing_dir);
  s_crop->add_option("--out-dir", crop.out_dir, "Directory for crop PNGs")->required();
  s_crop->add_option("--out", crop.out)->required();
  s_crop->add_option("--mode", crop.mode)->check(CLI::IsMember({"axis", "rotated"}));

  FilterOpts filter;
  auto *s_filter = app.add_subcommand("filter", "Drop ignored and out-of-charset instances");
  s_filter->add_option("--in", filter.in)->required()->check(existing);
  s_filter->add_option("--out", filter.out)->required();
  s_filter->add_option("--drops", filter.drops, "Defaults to <out stem>.drops.jsonl");
  s_filter->add_option("--charset", filter.charset)->check(CLI::IsMember({"default", "strict"}));

  DedupOpts dedup;
  auto *s_dedup = app.add_subcommand("dedup", "Remove exact duplicates and reference-source images");
  s_dedup->add_option("--in", dedup.in)->required()->check(existing);
  s_dedup->add_option("--out", dedup.out)->required();
  s_dedup->add_option("--drops", dedup.drops, "Defaults to <out stem>.drops.jsonl");
  s_dedup->add_option("--reference-ids", dedup.reference_ids, "One source image id per line")
      ->check(existing);

  VoteOpts vote;
  auto *s_vote = app.add_subcommand("vote", "Harvest pseudo-labeled regions by detector consensus");
  s_vote->add_option("--detections", vote.detections, "One file per detector")->required()->check(existing);
  s_vote->add_option("--out", vote.out)->required();
  s_vote->add_option("--iou", vote.iou);
  s_vote->add_flag("--allow-partial", vote.allow_partial, "Accept groups missing a detector");
  s_vote->add_option("--dataset", vote.dataset);
  s_vote->add_option("--images", vote.images, "Image root for content digests")->check(existing_dir);

  DifficultyOpts diff;
  auto *s_diff = app.add_subcommand("difficulty", "Assign difficulty levels by ensemble voting");
  s_diff->add_option("--in", diff.in)->required()->check(existing);
  s_diff->add_option("--predictions", diff.predictions)->required()->check(existing);
  s_diff->add_option("--out", diff.out)->required();
  s_diff->add_option("--mode", diff.mode);
  s_diff->add_option("--report", diff.report, "JSON level distribution");

  EvaluateOpts eval;
  auto *s_eval = app.add_subcommand("evaluate", "Word accuracy per model and subset");
  s_eval->add_option("--gt", eval.gt)->required()->check(existing);
  s_eval->add_option("--predictions", eval.predictions)->required()->check(existing);
  s_eval->add_option("--mode", eval.mode);
  s_eval->add_option("--subset", eval.subsets, "name=path of a subset file");
  s_eval->add_option("--incomplete", eval.incomplete, "pairs.jsonl from mutate-incomplete")
      ->check(existing);
  s_eval->add_option("--out", eval.out, "JSON report");

  AssembleOpts assemble;
  auto *s_asm = app.add_subcommand("assemble", "Build benchmark subsets and the training split");
  s_asm->add_option("--spec", assemble.spec)->required()->check(existing);
  s_asm->add_option("--corpus", assemble.corpus)->required()->check(existing);
  s_asm->add_option("--decisions", assemble.decisions)->check(existing);
  s_asm->add_option("--out-dir", assemble.out_dir)->required();

  MutateOpts mutate;
  auto *s_mut = app.add_subcommand("mutate-incomplete", "Crop one character off easy instances");
  s_mut->add_option("--corpus", mutate.corpus)->required()->check(existing);
  s_mut->add_option("--subset", mutate.subset)->check(existing);
  s_mut->add_option("--count", mutate.count);
  s_mut->add_option("--crops", mutate.crops)->check(existing_dir);
  s_mut->add_option("--images", mutate.images)->check(existing_dir);
  s_mut->add_option("--out-dir", mutate.out_dir)->required();

  StatsOpts stats;
  auto *s_stats = app.add_subcommand("stats", "Corpus summary and level distribution");
  s_stats->add_option("--in", stats.in)->required()->check(existing);
  s_stats->add_option("--json", stats.json);

  ScopeOpts scope;
  auto *s_scope = app.add_subcommand("scope", "Benchmark saturation headroom");
  s_scope->add_option("--total", scope.total)->required();
  s_scope->add_option("--errors", scope.errors)->required();
  s_scope->add_option("--mislabeled", scope.mislabeled)->required();
  s_scope->add_option("--unrecognizable", scope.unrecognizable)->required();

  CollisionOpts coll;
  auto *s_coll = app.add_subcommand("collisions", "Queue corpus labels that also occur in a benchmark");
  s_coll->add_option("--corpus", coll.corpus)->required()->check(existing);
  s_coll->add_option("--benchmark", coll.bench)->required()->check(existing);
  s_coll->add_option("--out", coll.out)->required();
  s_coll->add_option("--mode", coll.mode);

  ServeOpts serve;
  auto *s_serve = app.add_subcommand("review-serve", "Serve review queues over HTTP");
  s_serve->add_option("--queues", serve.queues, "Directory of queue .jsonl files")->required()->check(existing_dir);
  s_serve->add_option("--decisions", serve.decisions, "Append-only decision log")->required();
  s_serve->add_option("--images", serve.images, "Corpus image root")->check(existing_dir);
  s_serve->add_option("--ui", serve.ui, "Static UI directory")->check(existing_dir);
  s_serve->add_option("--thumbs", serve.thumbs, "Thumbnail cache directory");
  s_serve->add_option("--host", serve.host);
  s_serve->add_option("--port", serve.port)->envname("STRKIT_PORT");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  g.seed_given = app.get_option("--seed")->count() > 0 || std::getenv("STRKIT_SEED") != nullptr;

  Sink sink(g.dry_run, out);
  try {
    if (s_ingest->parsed()) return do_ingest(ingest, g, sink, out);
    if (s_crop->parsed()) return do_crop(crop, g, sink, out);
    if (s_filter->parsed()) return do_filter(filter, g, sink, out);
    if (s_dedup->parsed()) return do_dedup(dedup, g, sink, out);
    if (s_vote->parsed()) return do_vote(vote, g, sink, out);
    if (s_diff->parsed()) return do_difficulty(diff, g, sink, out);
    if (s_eval->parsed()) return do_evaluate(eval, g, sink, out);
    if (s_asm->parsed()) return do_assemble(assemble, g, sink, out);
    if (s_mut->parsed()) return do_mutate(mutate, g, sink, out);
    if (s_stats->parsed()) return do_stats(stats, g, sink, out);
    if (s_scope->parsed()) return do_scope(scope, out);
    if (s_coll->parsed()) return do_collisions(coll, g, sink, out);
    if (s_serve->parsed()) return do_serve(serve, g, out);
  } catch (const UsageError &e) {
    err << "strkit: " << e.what() << '\n';
    return 2;
  } catch (const std::exception &e) {
    err << "strkit: " << e.what() << '\n';
    return 1;
  }
  err << "strkit: no subcommand given\n";
  return 2;
}

}  // namespace strkit::cli
