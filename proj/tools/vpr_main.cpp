// vpr: appearance-based localization of camera journeys along indoor
// corridors. Stages: synthesize corpora, extract dense descriptors, train
// codebooks, encode frames, build/query retrieval indexes, and run the
// leave-one-journey-out evaluation with bootstrap error reports.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>

#include "vpr/vpr.hpp"

namespace fs = std::filesystem;

namespace {

struct CliState {
  std::string config_path;
  std::string out_override;
  std::string split_override;
  std::string index_dir;
  std::string frames_path;
  uint64_t seed = 0;
  bool seed_set = false;
  int jobs = 0;
  int topk = 0;
};

vpr::RunConfig resolve_config(const CliState& cli) {
  vpr::RunConfig config;
  if (!cli.config_path.empty()) config = vpr::load_run_config(cli.config_path);
  if (cli.seed_set) config.seed = cli.seed;
  if (cli.jobs > 0) config.jobs = cli.jobs;
  if (!cli.out_override.empty()) config.out_dir = cli.out_override;
  if (!cli.split_override.empty()) config.split = vpr::device_split_from_name(cli.split_override);
  if (cli.topk > 0) config.topk = cli.topk;
  return config;
}

vpr::Corpus load_corpus_checked(const vpr::RunConfig& config) {
  if (config.dataset_root.empty())
    throw vpr::DataError("config: dataset_root is required for this command");
  if (!fs::exists(config.dataset_root))
    throw vpr::DataError("dataset_root does not exist: " + config.dataset_root);
  vpr::Corpus corpus = vpr::scan_corpus(config.dataset_root, true);
  if (corpus.journeys.empty())
    throw vpr::DataError("no journeys found under " + config.dataset_root);
  corpus.validate();
  return corpus;
}

std::string corpus_work_dir(const vpr::RunConfig& config, const vpr::Corpus& corpus) {
  return (fs::path(config.out_dir) / "cache" / vpr::corpus_content_hash(corpus)).string();
}

int cmd_synth(const CliState& cli) {
  vpr::RunConfig config = resolve_config(cli);
  std::string root = !cli.out_override.empty()
                         ? cli.out_override
                         : (!config.dataset_root.empty() ? config.dataset_root : "corpus");
  auto specs = config.synth_specs();
  vpr::write_synthetic_corpus(root, specs, config.seed);
  int passes = 0;
  for (const auto& s : specs) passes += s.passes;
  std::cout << "[synth] wrote " << specs.size() << " corridor(s), " << passes
            << " journey(s) under " << root << " (seed " << config.seed << ")\n";
  return 0;
}

int cmd_extract(const CliState& cli) {
  vpr::RunConfig config = resolve_config(cli);
  vpr::Corpus corpus = load_corpus_checked(config);
  std::string work = corpus_work_dir(config, corpus);
  for (vpr::Method m : config.methods) {
    vpr::StageCounts counts =
        vpr::ensure_corpus_dumps(corpus, m, work, config.jobs, config.cache);
    if (counts.computed == 0)
      std::cout << "[extract] " << vpr::method_name(m) << ": warm cache, stage skipped ("
                << counts.reused << " dumps reused)\n";
    else
      std::cout << "[extract] " << vpr::method_name(m) << ": " << counts.computed
                << " journeys extracted, " << counts.reused << " reused\n";
  }
  std::cout << "[extract] dumps under " << work << "\n";
  return 0;
}

std::vector<std::pair<vpr::Encoding, int>> codebook_plan(const vpr::RunConfig& config,
                                                         vpr::Method method) {
  std::vector<std::pair<vpr::Encoding, int>> plan;
  if (method == vpr::Method::LW_COLOR) return plan;  // DIRECT needs no codebook
  for (vpr::Encoding e : config.encodings) {
    if (e == vpr::Encoding::HA) plan.emplace_back(e, config.ha_k);
    else if (e == vpr::Encoding::VLAD) plan.emplace_back(e, config.vlad_k);
  }
  return plan;
}

std::string codebook_label(vpr::Method m, vpr::Encoding e, int K) {
  return std::string(vpr::method_name(m)) + "_" + vpr::encoding_name(e) + "_K" + std::to_string(K);
}

int cmd_train(const CliState& cli) {
  vpr::RunConfig config = resolve_config(cli);
  vpr::Corpus corpus = load_corpus_checked(config);
  std::string work = corpus_work_dir(config, corpus);
  fs::path dir = fs::path(config.out_dir) / "codebooks";
  fs::create_directories(dir);
  for (vpr::Method m : config.methods) {
    auto plan = codebook_plan(config, m);
    if (plan.empty()) {
      std::cout << "[train] " << vpr::method_name(m) << ": DIRECT encoding, no codebook needed\n";
      continue;
    }
    for (auto [enc, K] : plan) {
      vpr::Codebook cb = vpr::train_corpus_codebook(corpus, config, m, K, work);
      std::string label = codebook_label(m, enc, K);
      vpr::write_codebook((dir / (label + ".codebook")).string(), cb);
      std::cout << "[train] " << label << ": distortion "
                << vpr::format_sci(cb.distortion_log.back(), 6) << " after "
                << cb.distortion_log.size() << " assignment phases\n";
    }
  }
  return 0;
}

int cmd_encode(const CliState& cli) {
  vpr::RunConfig config = resolve_config(cli);
  vpr::Corpus corpus = load_corpus_checked(config);
  std::string work = corpus_work_dir(config, corpus);
  fs::path cb_dir = fs::path(config.out_dir) / "codebooks";
  fs::path codes_root = fs::path(config.out_dir) / "codes";
  for (vpr::Method m : config.methods) {
    vpr::ensure_corpus_dumps(corpus, m, work, config.jobs, config.cache);
    std::vector<std::pair<vpr::Encoding, int>> plan = codebook_plan(config, m);
    if (m == vpr::Method::LW_COLOR) plan.emplace_back(vpr::Encoding::DIRECT, 0);
    for (auto [enc, K] : plan) {
      vpr::Codebook cb;
      const vpr::Codebook* cb_ptr = nullptr;
      std::string label = enc == vpr::Encoding::DIRECT
                              ? std::string(vpr::method_name(m)) + "_DIRECT"
                              : codebook_label(m, enc, K);
      if (enc != vpr::Encoding::DIRECT) {
        fs::path cb_path = cb_dir / (codebook_label(m, enc, K) + ".codebook");
        if (fs::exists(cb_path)) {
          cb = vpr::read_codebook(cb_path.string());
        } else {
          cb = vpr::train_corpus_codebook(corpus, config, m, K, work);
          fs::create_directories(cb_dir);
          vpr::write_codebook(cb_path.string(), cb);
        }
        cb_ptr = &cb;
      }
      fs::path out_dir = codes_root / label;
      fs::create_directories(out_dir);
      for (const vpr::Journey& j : corpus.journeys) {
        std::string dump = vpr::detail::journey_dump_path(work, j.journey_id, m);
        std::vector<vpr::FrameCode> codes =
            vpr::encode_dump(dump, enc, cb_ptr, config.jobs);
        vpr::write_frame_codes((out_dir / (j.journey_id + ".codes")).string(), codes, m);
      }
      std::cout << "[encode] " << label << ": " << corpus.journeys.size() << " journeys -> "
                << out_dir.string() << "\n";
    }
  }
  return 0;
}

int cmd_index(const CliState& cli) {
  vpr::RunConfig config = resolve_config(cli);
  vpr::Corpus corpus = load_corpus_checked(config);
  std::string work = corpus_work_dir(config, corpus);
  for (vpr::Method m : config.methods) {
    std::vector<std::pair<vpr::Encoding, int>> plan = codebook_plan(config, m);
    if (m == vpr::Method::LW_COLOR) plan.emplace_back(vpr::Encoding::DIRECT, 0);
    for (auto [enc, K] : plan) {
      // Signed encodings (VLAD, DIRECT) only admit Hellinger; HA follows
      // the configured metric list.
      vpr::DistanceMetric metric = enc == vpr::Encoding::HA ? config.metrics.front()
                                                            : vpr::DistanceMetric::Hellinger;
      std::string label = enc == vpr::Encoding::DIRECT
                              ? std::string(vpr::method_name(m)) + "_DIRECT"
                              : codebook_label(m, enc, K);
      fs::path index_dir = fs::path(config.out_dir) / "index" / label;
      vpr::build_index(corpus, config, m, enc, K, metric, index_dir, work, std::cout);
    }
  }
  return 0;
}

int cmd_query(const CliState& cli) {
  vpr::RunConfig config = resolve_config(cli);
  if (cli.index_dir.empty()) throw vpr::DataError("query: --index is required");
  if (cli.frames_path.empty()) throw vpr::DataError("query: --frames is required");
  fs::path manifest = cli.frames_path;
  if (fs::is_directory(manifest)) manifest /= "journey.manifest";
  if (!fs::exists(manifest))
    throw vpr::DataError("no journey manifest at " + manifest.string());
  vpr::Journey query = vpr::load_journey(manifest.string(), true);

  vpr::ScoreMatrix matrix;
  std::vector<vpr::Match> matches =
      vpr::query_index(cli.index_dir, query, config.jobs, &matrix);
  vpr::IndexMeta meta = vpr::read_index_meta(fs::path(cli.index_dir) / "index.meta");

  fs::path out = !cli.out_override.empty() ? fs::path(cli.out_override) : fs::path("matches.csv");
  if (fs::is_directory(out) || (!out.has_extension() && !fs::exists(out))) {
    fs::create_directories(out);
    out /= query.journey_id + "_matches.csv";
  }
  vpr::write_matches_csv(out.string(), matches, "query", meta.config_hash);
  size_t valid = 0;
  for (const vpr::Match& m : matches)
    if (m.valid) ++valid;
  std::cout << "[query] " << query.journey_id << " vs " << meta.journey_ids.size()
            << " indexed journeys: " << valid << "/" << matches.size() << " frames matched -> "
            << out.string() << "\n";
  if (config.topk > 0) {
    fs::path topk_path = out.parent_path() / (out.stem().string() + "_topk.csv");
    vpr::write_topk_csv(topk_path.string(), matrix, config.topk, "query", meta.config_hash);
    std::cout << "[query] top-" << config.topk << " diagnostics -> " << topk_path.string() << "\n";
  }
  return 0;
}

int cmd_eval(const CliState& cli) {
  vpr::RunConfig config = resolve_config(cli);
  vpr::Corpus corpus = load_corpus_checked(config);
  std::vector<vpr::ReportRow> rows = vpr::run_eval_pipeline(corpus, config, std::cout);
  std::cout << vpr::format_report_text(rows);
  return 0;
}

int cmd_report(const CliState& cli) {
  vpr::RunConfig config = resolve_config(cli);
  std::vector<vpr::ReportRow> rows =
      vpr::assemble_report(config.out_dir, vpr::config_hash_hex(config));
  std::cout << vpr::format_report_text(rows);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Appearance-based localization of camera journeys along corridors"};
  app.fallthrough();
  app.require_subcommand(1);

  CliState cli;
  app.add_option("--config", cli.config_path, "Key=value run configuration file");
  app.add_option("--seed", cli.seed, "Master random seed (overrides config)")
      ->each([&cli](const std::string&) { cli.seed_set = true; });
  app.add_option("--jobs", cli.jobs, "Worker threads (never changes results)");
  app.add_option("--out", cli.out_override, "Output directory (synth: corpus root)");
  app.add_option("--device-split", cli.split_override, "Device pairing: within, cross, or all")
      ->check(CLI::IsMember({"within", "cross", "all"}));

  auto* synth = app.add_subcommand("synth", "Generate a deterministic synthetic corpus");
  auto* extract = app.add_subcommand("extract", "Extract dense descriptors for all journeys");
  auto* train = app.add_subcommand("train", "Train k-means codebooks over the corpus");
  auto* encode = app.add_subcommand("encode", "Encode all journeys into frame codes");
  auto* index = app.add_subcommand("index", "Build a retrieval index (codebook + codes)");
  auto* query = app.add_subcommand("query", "Localize a journey against a prebuilt index");
  auto* eval = app.add_subcommand("eval", "Run the leave-one-journey-out evaluation");
  auto* report = app.add_subcommand("report", "Re-assemble the summary report from results/");
  query->add_option("--index", cli.index_dir, "Index directory (from `vpr index`)");
  query->add_option("--frames", cli.frames_path, "Query journey directory or manifest path");
  query->add_option("--topk", cli.topk, "Also export top-k neighbour diagnostics");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (synth->parsed()) return cmd_synth(cli);
    if (extract->parsed()) return cmd_extract(cli);
    if (train->parsed()) return cmd_train(cli);
    if (encode->parsed()) return cmd_encode(cli);
    if (index->parsed()) return cmd_index(cli);
    if (query->parsed()) return cmd_query(cli);
    if (eval->parsed()) return cmd_eval(cli);
    if (report->parsed()) return cmd_report(cli);
    std::cerr << "error: no command selected\n";
    return 1;
  } catch (const vpr::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
