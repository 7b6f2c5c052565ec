// Command-line front end: train / parse / evaluate / finetune.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "uniparser/corpus.hpp"
#include "uniparser/metrics.hpp"
#include "uniparser/model_io.hpp"
#include "uniparser/runtime.hpp"
#include "uniparser/synthetic.hpp"
#include "uniparser/trainer.hpp"

namespace fs = std::filesystem;
using namespace uniparser;

namespace {

// Structured CSV inside a source directory; prefers *_structured.csv.
fs::path find_source_csv(const fs::path& dir) {
  std::vector<fs::path> candidates;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv")
      candidates.push_back(entry.path());
  }
  std::sort(candidates.begin(), candidates.end());
  for (const fs::path& p : candidates)
    if (p.filename().string().find("structured") != std::string::npos) return p;
  if (!candidates.empty()) return candidates.front();
  throw DataError("no CSV file found in " + dir.string());
}

std::vector<std::string> list_sources(const fs::path& root) {
  if (!fs::is_directory(root)) throw DataError("not a dataset directory: " + root.string());
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(root))
    if (entry.is_directory()) names.push_back(entry.path().filename().string());
  std::sort(names.begin(), names.end());
  if (names.empty()) throw DataError("no source subdirectories in " + root.string());
  return names;
}

LabeledDataset load_source_path(const fs::path& path, const std::string& content_col,
                                const std::string& template_col) {
  const fs::path file = fs::is_directory(path) ? find_source_csv(path) : path;
  return load_dataset(file, content_col, template_col);
}

struct TrainFlags {
  std::string data;
  std::vector<std::string> exclude;
  std::string out;
  std::string content_col = "Content";
  std::string template_col = "EventTemplate";
  TrainConfig cfg;
};

struct ParseFlags {
  std::string model;
  std::string input;
  std::string output;
  int batch_size = 512;
  int workers = 1;
};

struct EvalFlags {
  std::string model;
  std::string data;
  std::string json_out;
  std::string content_col = "Content";
  std::string template_col = "EventTemplate";
  int batch_size = 512;
  int workers = 1;
  int k = 0;
  bool oracle = false;
};

struct FinetuneFlags {
  std::string model;
  std::string data;
  std::string out;
  std::string content_col = "Content";
  std::string template_col = "EventTemplate";
  TrainConfig cfg;
};

void add_optimizer_flags(CLI::App* cmd, TrainConfig& cfg) {
  cmd->add_option("--lr", cfg.learning_rate, "Initial Adam learning rate")
      ->capture_default_str();
  cmd->add_option("--batch-size", cfg.batch_size, "Training batch size in tokens")
      ->capture_default_str();
  cmd->add_option("--epochs", cfg.epochs, "Training epochs")->capture_default_str();
  cmd->add_option("--negatives", cfg.negatives, "Dissimilar contexts |V_d| per sample")
      ->capture_default_str();
  cmd->add_option("--lambda", cfg.lambda, "Weight of the contrastive loss term")
      ->capture_default_str();
  cmd->add_option("--seed", cfg.seed, "RNG seed; fixes the run end to end")
      ->capture_default_str();
}

int cmd_train(const TrainFlags& f) {
  const std::vector<std::string> names = list_sources(f.data);
  for (const std::string& ex : f.exclude) {
    if (std::find(names.begin(), names.end(), ex) == names.end()) {
      std::string known;
      for (const std::string& n : names) known += (known.empty() ? "" : ", ") + n;
      throw DataError("--exclude " + ex + " does not name a source; have: " + known);
    }
  }

  std::vector<LabeledDataset> datasets;
  std::vector<const LabeledDataset*> selected;
  for (const std::string& name : names) {
    if (std::find(f.exclude.begin(), f.exclude.end(), name) != f.exclude.end()) continue;
    datasets.push_back(
        load_source_path(fs::path(f.data) / name, f.content_col, f.template_col));
    if (datasets.back().skipped > 0)
      std::cerr << name << ": skipped " << datasets.back().skipped << " unusable rows\n";
  }
  for (const LabeledDataset& d : datasets) selected.push_back(&d);

  const TrainingPool pool = build_training_pool(selected, f.cfg.cap);
  std::cerr << "training on " << pool.messages.size() << " messages from " << selected.size()
            << " sources (" << pool.groups.size() << " groups)\n";
  TrainReport report;
  const ModelParameters model = train(pool, f.cfg, &report, &std::cerr);
  save_model(f.out, model);
  std::cerr << "model written to " << f.out << "\n";
  return 0;
}

int cmd_parse(const ParseFlags& f) {
  const auto started = std::chrono::steady_clock::now();
  const ModelParameters model = load_model(f.model);

  std::ifstream in(f.input, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + f.input);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }

  ThroughputReport report;
  const std::vector<ParseResult> results =
      parse_batch(model, lines, f.batch_size, f.workers, &report);

  std::ostream* out = &std::cout;
  std::ofstream file_out;
  if (!f.output.empty()) {
    file_out.open(f.output, std::ios::binary);
    if (!file_out) throw DataError("cannot open file for writing: " + f.output);
    out = &file_out;
  }
  for (const ParseResult& r : results) {
    nlohmann::json j;
    j["line"] = r.line;
    j["content"] = r.raw;
    if (!r.error.empty()) {
      j["error"] = r.error;
    } else {
      j["template"] = r.template_text;
      j["parameters"] = r.parameters;
    }
    *out << j.dump() << '\n';
  }
  out->flush();

  // Wall clock from program start so loading counts, as the throughput is
  // meant to reflect end-to-end cost.
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  char buf[160];
  std::snprintf(buf, sizeof(buf), "throughput messages=%zu seconds=%.3f rate=%.1f msg/s",
                results.size(), seconds, seconds > 0 ? results.size() / seconds : 0.0);
  std::cerr << buf << "\n";
  return 0;
}

int cmd_evaluate(const EvalFlags& f) {
  if (!f.oracle && f.model.empty())
    throw CLI::RequiredError("--model (or pass --oracle)");
  const LabeledDataset data = load_source_path(f.data, f.content_col, f.template_col);
  if (data.skipped > 0)
    std::cerr << data.source_name << ": skipped " << data.skipped << " unusable rows\n";

  ModelParameters model;
  if (!f.oracle) model = load_model(f.model);
  const EvaluationResult ev = evaluate(model, data, f.workers, f.batch_size, f.oracle, f.k);
  std::cout << metric_report_text(ev.report) << "\n";
  if (!f.json_out.empty()) {
    std::ofstream jf(f.json_out, std::ios::binary);
    if (!jf) throw DataError("cannot open file for writing: " + f.json_out);
    jf << metric_report_to_json(ev.report).dump(2) << "\n";
  }
  return 0;
}

int cmd_finetune(const FinetuneFlags& f) {
  ModelParameters model = load_model(f.model);
  const LabeledDataset data = load_source_path(f.data, f.content_col, f.template_col);
  if (data.records.empty()) throw DataError("fine-tune sample has no usable rows");
  if (data.skipped > 0)
    std::cerr << data.source_name << ": skipped " << data.skipped << " unusable rows\n";

  std::vector<const LabeledDataset*> one{&data};
  const TrainingPool pool = build_training_pool(one, f.cfg.cap);
  fine_tune(model, pool, f.cfg, nullptr, &std::cerr);
  save_model(f.out, model);
  std::cerr << "model written to " << f.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"UniParser: learned source-agnostic log parser"};
  app.require_subcommand(1);

  TrainFlags tf;
  CLI::App* train_cmd = app.add_subcommand("train", "Train a model on labeled sources");
  train_cmd->add_option("--data", tf.data, "Dataset root, one subdirectory per source")
      ->required();
  train_cmd->add_option("--exclude", tf.exclude,
                        "Source name to hold out (repeatable, leave-one-out)");
  train_cmd->add_option("--out", tf.out, "Output model file")->required();
  add_optimizer_flags(train_cmd, tf.cfg);
  train_cmd->add_option("--k", tf.cfg.k, "Context window radius")->capture_default_str();
  train_cmd->add_option("--d-emb", tf.cfg.d_emb, "Character embedding width")
      ->capture_default_str();
  train_cmd->add_option("--d-h", tf.cfg.d_h, "LSTM hidden width per direction")
      ->capture_default_str();
  train_cmd->add_option("--cap", tf.cfg.cap, "Max messages per source, 0 = all")
      ->capture_default_str();
  train_cmd->add_flag("--disable-context", tf.cfg.disable_context,
                      "Ablation: classify from token encodings only");
  train_cmd->add_flag("--disable-similarity", tf.cfg.disable_similarity,
                      "Ablation: drop the contrastive loss term");
  train_cmd->add_flag("--include-positive", tf.cfg.include_positive_in_denominator,
                      "Keep the positive pair inside the contrastive denominator");
  train_cmd->add_option("--content-col", tf.content_col, "CSV column with the raw message")
      ->capture_default_str();
  train_cmd->add_option("--template-col", tf.template_col,
                        "CSV column with the ground-truth template")
      ->capture_default_str();

  ParseFlags pf;
  CLI::App* parse_cmd = app.add_subcommand("parse", "Parse raw log lines into templates");
  parse_cmd->add_option("--model", pf.model, "Trained model file")->required();
  parse_cmd->add_option("--input", pf.input, "File of raw lines, one message per line")
      ->required();
  parse_cmd->add_option("--output", pf.output, "JSONL output file (default stdout)");
  parse_cmd->add_option("--batch-size", pf.batch_size, "Tokens per inference batch")
      ->capture_default_str();
  parse_cmd->add_option("--workers", pf.workers, "Worker threads")->capture_default_str();

  EvalFlags ef;
  CLI::App* eval_cmd = app.add_subcommand("evaluate", "Score a model on a labeled source");
  eval_cmd->add_option("--model", ef.model, "Trained model file");
  eval_cmd->add_option("--data", ef.data, "Source directory or structured CSV")->required();
  eval_cmd->add_option("--json", ef.json_out, "Also write the report as JSON");
  eval_cmd->add_option("--batch-size", ef.batch_size, "Tokens per inference batch")
      ->capture_default_str();
  eval_cmd->add_option("--workers", ef.workers, "Worker threads")->capture_default_str();
  eval_cmd->add_option("--k", ef.k, "Override context radius, 0 = model default")
      ->capture_default_str();
  eval_cmd->add_flag("--oracle", ef.oracle,
                     "Score truth labels against themselves (pipeline check)");
  eval_cmd->add_option("--content-col", ef.content_col, "CSV column with the raw message")
      ->capture_default_str();
  eval_cmd->add_option("--template-col", ef.template_col,
                       "CSV column with the ground-truth template")
      ->capture_default_str();

  FinetuneFlags ff;
  ff.cfg.epochs = kDefaultFineTuneEpochs;
  CLI::App* ft_cmd =
      app.add_subcommand("finetune", "Continue training a model on a few labeled lines");
  ft_cmd->add_option("--model", ff.model, "Base model file")->required();
  ft_cmd->add_option("--data", ff.data, "Labeled sample: source directory or structured CSV")
      ->required();
  ft_cmd->add_option("--out", ff.out, "Output model file")->required();
  add_optimizer_flags(ft_cmd, ff.cfg);
  ft_cmd->add_option("--cap", ff.cfg.cap, "Max sample rows, 0 = all")->capture_default_str();
  ft_cmd->add_flag("--disable-similarity", ff.cfg.disable_similarity,
                   "Drop the contrastive loss term");
  ft_cmd->add_option("--content-col", ff.content_col, "CSV column with the raw message")
      ->capture_default_str();
  ft_cmd->add_option("--template-col", ff.template_col,
                     "CSV column with the ground-truth template")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage problems exit 1, --help exits 0
  }

  try {
    if (train_cmd->parsed()) return cmd_train(tf);
    if (parse_cmd->parsed()) return cmd_parse(pf);
    if (eval_cmd->parsed()) return cmd_evaluate(ef);
    if (ft_cmd->parsed()) return cmd_finetune(ff);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
