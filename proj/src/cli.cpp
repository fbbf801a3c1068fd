#include "depgen/cli.hpp"

#include <atomic>
#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "depgen/corpus.hpp"
#include "depgen/error.hpp"
#include "depgen/eval.hpp"
#include "depgen/model.hpp"
#include "depgen/realize.hpp"

namespace depgen {

namespace {

struct RunConfig {
  int beam = 20;
  int candidates = 20;
  int top_k = 5;
  double threshold = 0.0;
  int max_exhaustive = 8;
  int perm_cap = 7;
  int node_cap = 100;
  double tree_score_weight = 0.0;
  int jobs = 1;
};

void validate(const RunConfig& cfg) {
  if (cfg.beam < 1 || cfg.candidates < 1 || cfg.top_k < 1 ||
      cfg.max_exhaustive < 1 || cfg.perm_cap < 1 || cfg.node_cap < 1 ||
      cfg.jobs < 1) {
    throw DepgenError("beam, candidates, top-k, caps and jobs must be >= 1");
  }
}

// Config file values fill in wherever the flag was not given explicitly.
void overlay_config_file(const std::string& path, const CLI::App& app,
                         RunConfig& cfg) {
  if (path.empty()) return;
  std::ifstream in(path);
  if (!in) throw DepgenError("cannot read config file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw DepgenError("config file is not valid JSON: " + std::string(e.what()));
  }
  auto take = [&](const char* key, const char* flag, auto& slot) {
    const CLI::Option* opt = app.get_option_no_throw(flag);
    if (opt && opt->count() > 0) return;
    if (doc.contains(key)) {
      slot = doc.at(key).get<std::decay_t<decltype(slot)>>();
    }
  };
  take("beam", "--beam", cfg.beam);
  take("candidates", "--candidates", cfg.candidates);
  take("top_k", "--top", cfg.top_k);
  take("threshold", "--threshold", cfg.threshold);
  take("max_exhaustive", "--max-exhaustive", cfg.max_exhaustive);
  take("perm_cap", "--perm-cap", cfg.perm_cap);
  take("node_cap", "--node-cap", cfg.node_cap);
  take("tree_score_weight", "--tree-score-weight", cfg.tree_score_weight);
  take("jobs", "--jobs", cfg.jobs);
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DepgenError("cannot read file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

int cmd_train(const std::string& corpus_path, const std::string& trees_path,
              const std::string& out_path, std::string report_path,
              const RunConfig& cfg) {
  auto scenarios = load_scenarios(corpus_path);
  if (!trees_path.empty()) {
    attach_trees(scenarios, load_conllu(trees_path));
  }
  long long pairs = 0;
  for (const auto& s : scenarios) {
    pairs += std::min(s.references.size(), s.parsed_trees.size());
  }
  if (pairs == 0) {
    throw DepgenError("no training sentences with trees in " + corpus_path);
  }

  ModelConfig mc;
  mc.threshold = cfg.threshold;
  mc.max_exhaustive = cfg.max_exhaustive;
  mc.perm_cap = cfg.perm_cap;
  mc.node_cap = cfg.node_cap;
  const TrainingResult result = train_model(scenarios, mc);
  save_model(result.model, out_path);

  if (report_path.empty()) report_path = out_path + ".align.jsonl";
  std::ofstream report(report_path);
  if (!report) {
    throw DepgenError("cannot write alignment report: " + report_path);
  }
  for (const auto& record : result.alignment) {
    report << record.to_json() << "\n";
  }

  std::cout << "scenarios: " << result.scenario_count << "\n"
            << "sentences: " << result.sentence_count << "\n"
            << "labels: " << result.model.label_model.total_labels << " ("
            << result.model.label_model.unigram.size() << " distinct)\n"
            << "features: " << result.model.feature_model.features.size()
            << "\n"
            << "word features: " << result.model.word_model.features.size()
            << "\n"
            << "model: " << out_path << "\n"
            << "alignment report: " << report_path << "\n";
  return 0;
}

int cmd_generate(const std::string& model_path, const std::string& input_path,
                 const std::string& out_path, const RunConfig& cfg,
                 bool trace) {
  const TrainedModel model = load_model(model_path);
  const auto scenarios = load_scenarios(input_path);

  GenOptions options;
  options.beam = cfg.beam;
  options.candidates = cfg.candidates;
  options.top_k = cfg.top_k;
  options.threshold = cfg.threshold;
  options.max_exhaustive = static_cast<std::size_t>(cfg.max_exhaustive);
  options.perm_cap = cfg.perm_cap;
  options.node_cap = cfg.node_cap;
  options.tree_score_weight = cfg.tree_score_weight;

  struct Outcome {
    std::vector<GeneratedSentence> sentences;
    std::string error;
  };
  std::vector<Outcome> outcomes(scenarios.size());

  std::vector<std::vector<std::string>> traces(scenarios.size());
  auto run_one = [&](std::size_t i) {
    try {
      outcomes[i].sentences =
          generate(model, scenarios[i].mr, options, nullptr,
                   trace ? &traces[i] : nullptr);
    } catch (const std::exception& e) {
      outcomes[i].error =
          "scenario '" + scenarios[i].id + "': " + e.what();
    }
  };

  if (cfg.jobs <= 1 || scenarios.size() <= 1) {
    for (std::size_t i = 0; i < scenarios.size(); ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    const int workers =
        std::min<std::size_t>(cfg.jobs, scenarios.size());
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < scenarios.size();
             i = next.fetch_add(1)) {
          run_one(i);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw DepgenError("cannot write output file: " + out_path);
    out = &file;
  }

  bool any_failed = false;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    for (const auto& step : traces[i]) {
      std::cerr << step << "\n";
    }
    if (!outcomes[i].error.empty()) {
      any_failed = true;
      std::cerr << "error: " << outcomes[i].error << "\n";
      continue;
    }
    const auto& sentences = outcomes[i].sentences;
    const std::size_t limit =
        std::min<std::size_t>(sentences.size(), cfg.top_k);
    for (std::size_t rank = 0; rank < limit; ++rank) {
      nlohmann::ordered_json line;
      line["scenario"] = scenarios[i].id;
      line["rank"] = rank + 1;
      line["sentence"] = sentences[rank].sentence;
      line["score"] = sentences[rank].score;
      line["tree_score"] = sentences[rank].tree_score;
      *out << line.dump() << "\n";
    }
  }
  return any_failed ? 1 : 0;
}

int cmd_eval(const std::string& hyp_path, const std::string& ref_path,
             const std::string& mr_path, bool smooth) {
  const auto hyp = read_lines(hyp_path);
  if (hyp.empty()) throw DepgenError("empty candidate list");

  EvalReport report;
  if (!ref_path.empty()) {
    const auto ref_lines = read_lines(ref_path);
    if (ref_lines.size() != hyp.size()) {
      throw DepgenError("line counts differ between --hyp and --ref");
    }
    std::vector<std::vector<std::string>> references;
    references.reserve(ref_lines.size());
    for (const auto& line : ref_lines) {
      std::vector<std::string> refs;
      std::stringstream ss(line);
      std::string part;
      while (std::getline(ss, part, '\t')) {
        if (!part.empty()) refs.push_back(part);
      }
      references.push_back(std::move(refs));
    }
    report.bleu = bleu4(hyp, references, smooth);
  }

  if (!mr_path.empty()) {
    const auto scenarios = load_scenarios(mr_path);
    if (scenarios.size() != hyp.size()) {
      throw DepgenError("line counts differ between --hyp and --mr");
    }
    for (std::size_t i = 0; i < hyp.size(); ++i) {
      ScenarioSlotError entry;
      entry.scenario = scenarios[i].id;
      entry.slots = slot_error(hyp[i], scenarios[i].mr);
      report.slots.redundant += entry.slots.redundant;
      report.slots.missing += entry.slots.missing;
      report.slots.total += entry.slots.total;
      report.per_scenario.push_back(std::move(entry));
    }
    report.slots.err =
        static_cast<double>(report.slots.redundant + report.slots.missing) /
        static_cast<double>(report.slots.total);
  }
  if (ref_path.empty() && mr_path.empty()) {
    throw DepgenError("eval needs --ref or --mr");
  }
  std::cout << report.to_json() << "\n";
  return 0;
}

int cmd_inspect(const std::string& model_path, bool words, long long limit) {
  const TrainedModel model = load_model(model_path);
  long long shown = 0;
  if (words) {
    for (const auto& [key, entry] : model.word_model.features) {
      if (limit > 0 && shown++ >= limit) break;
      std::cout << entry.count << "\t"
                << format_double(model.word_model.probability(entry)) << "\t"
                << key << "\n";
    }
  } else {
    for (const auto& [key, entry] : model.feature_model.features) {
      if (limit > 0 && shown++ >= limit) break;
      std::cout << entry.count << "\t"
                << format_double(model.feature_model.probability(entry))
                << "\t" << key << "\tslot=" << entry.dominant_slot() << "\n";
    }
  }
  return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"corpus-trained dependency-tree sentence generator"};
  app.set_version_flag("--version",
                       "depgen model format " + std::to_string(kModelVersion));
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_path;

  auto add_shared = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path,
                    "JSON file with default flag values");
    cmd->add_option("--threshold", cfg.threshold,
                    "drop labels below this unigram probability");
    cmd->add_option("--max-exhaustive", cfg.max_exhaustive,
                    "largest label set ordered by full enumeration");
    cmd->add_option("--perm-cap", cfg.perm_cap,
                    "largest unit count ordered by full enumeration");
    cmd->add_option("--node-cap", cfg.node_cap,
                    "hard limit on generated tree size");
  };

  auto* train = app.add_subcommand("train", "train a model from scenarios");
  std::string corpus_path, trees_path, model_out, report_path;
  train->add_option("--corpus", corpus_path, "scenario JSONL with references")
      ->required();
  train->add_option("--trees", trees_path,
                    "CoNLL-U parses when not inlined in the corpus");
  train->add_option("--out", model_out, "model file to write")->required();
  train->add_option("--align-report", report_path,
                    "alignment report path (default: <out>.align.jsonl)");
  add_shared(train);

  auto* gen = app.add_subcommand("generate", "generate sentences for MRs");
  std::string model_path, input_path, out_path;
  bool trace = false;
  gen->add_option("--model", model_path, "trained model file")->required();
  gen->add_option("--input", input_path, "scenario JSONL")->required();
  gen->add_option("--out", out_path, "output JSONL (default: stdout)");
  gen->add_option("--beam,-B", cfg.beam, "beam width");
  gen->add_option("--candidates,-C", cfg.candidates,
                  "lexicalized copies per tree");
  gen->add_option("--top", cfg.top_k, "sentences kept per scenario");
  gen->add_option("--tree-score-weight", cfg.tree_score_weight,
                  "weight of the tree score in the final ranking");
  gen->add_option("--jobs", cfg.jobs, "parallel scenario workers");
  gen->add_flag("--trace", trace, "log beam steps to standard error");
  add_shared(gen);

  auto* eval = app.add_subcommand("eval", "score generated sentences");
  std::string hyp_path, ref_path, mr_path;
  bool smooth = false;
  eval->add_option("--hyp", hyp_path, "one sentence per line")->required();
  eval->add_option("--ref", ref_path,
                   "tab-separated references, one line per sentence");
  eval->add_option("--mr", mr_path, "scenario JSONL for slot error");
  eval->add_flag("--smooth", smooth, "add-one smoothing on 2..4-gram counts");

  auto* inspect =
      app.add_subcommand("inspect-features", "dump trained features");
  std::string inspect_model;
  bool inspect_words = false;
  long long inspect_limit = 0;
  inspect->add_option("--model", inspect_model, "trained model file")
      ->required();
  inspect->add_flag("--words", inspect_words, "dump word features instead");
  inspect->add_option("--limit", inspect_limit, "stop after this many rows");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (train->parsed()) {
      overlay_config_file(config_path, *train, cfg);
      validate(cfg);
      return cmd_train(corpus_path, trees_path, model_out, report_path, cfg);
    }
    if (gen->parsed()) {
      overlay_config_file(config_path, *gen, cfg);
      validate(cfg);
      return cmd_generate(model_path, input_path, out_path, cfg, trace);
    }
    if (eval->parsed()) {
      return cmd_eval(hyp_path, ref_path, mr_path, smooth);
    }
    if (inspect->parsed()) {
      return cmd_inspect(inspect_model, inspect_words, inspect_limit);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace depgen
