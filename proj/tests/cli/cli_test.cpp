#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "tijere/corpus.hpp"

namespace fs = std::filesystem;
using namespace tijere;
using nlohmann::json;

namespace {

const fs::path kData = TIJERE_DATA_DIR;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result tijere_run(std::vector<std::string> args) {
  args.insert(args.begin(), "tijere");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() / ("tijere-cli-test-" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(dir / name) << text;
    return (dir / name).string();
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

json read_json(const fs::path& p) { return json::parse(corpus::read_file(p)); }

const std::string kApt29 = (kData / "fixtures" / "apt29.json").string();
const std::string kReport = (kData / "fixtures" / "report_triples.json").string();

}  // namespace

TEST_CASE("usage errors exit 2") {
  CHECK(tijere_run({}).code == cli::kUsageError);
  CHECK(tijere_run({"frobnicate"}).code == cli::kUsageError);
  const auto r = tijere_run({"stats"});
  CHECK(r.code == cli::kUsageError);
  CHECK(r.err.find("--help") != std::string::npos);
  CHECK(tijere_run({"stats", "--dataset", kApt29, "--workers", "0"}).code ==
        cli::kUsageError);
  CHECK(tijere_run({"--help"}).code == cli::kOk);
}

TEST_CASE("validate") {
  Scratch s;
  CHECK(tijere_run({"validate", "--dataset", kApt29}).code == cli::kOk);

  const auto bad = s.write(
      "dangling.json",
      R"([{"text":"APT28 used X-Agent","entities":[[0,1,"HackOrg"]],"relations":[],)"
      R"("entity_labels":["B-HackOrg","O","I-Tool"]}])");
  const auto r = tijere_run({"validate", "--dataset", bad, "--out", s.path("v")});
  CHECK(r.code == cli::kDataError);
  const auto report = read_json(s.dir / "v" / "validation.json");
  REQUIRE(report["structural_errors"].size() == 1);
  CHECK(report["structural_errors"][0]["kind"] == "LabelError");

  // Two of the listed triples fall outside the bundled domain/range rules.
  CHECK(tijere_run({"validate", "--dataset", kReport}).code == cli::kOk);
  const auto strict = tijere_run({"validate", "--dataset", kReport, "--strict"});
  CHECK(strict.code == cli::kDataError);
  CHECK(strict.out.find("ontology violations: 2") != std::string::npos);

  CHECK(tijere_run({"validate", "--dataset", s.path("missing.json")}).code ==
        cli::kDataError);
}

TEST_CASE("stats and mslr dumps") {
  Scratch s;
  const auto r = tijere_run({"stats", "--dataset", kApt29, "--out", s.path("st")});
  CHECK(r.code == cli::kOk);
  const auto stats = read_json(s.dir / "st" / "stats.json");
  CHECK(stats["relation_counts"]["targets"] == 2);
  CHECK(stats["entity_counts"]["Tool"] == 1);
  CHECK(fs::exists(s.dir / "st" / "run_config.json"));

  REQUIRE(tijere_run({"mslr", "--dataset", kApt29, "--out", s.path("m")}).code == cli::kOk);
  std::ifstream lines(s.dir / "m" / "mslr.jsonl");
  std::size_t n = 0;
  for (std::string line; std::getline(lines, line);) ++n;
  CHECK(n == 3);
  CHECK(fs::exists(s.dir / "m" / "vocab.json"));
  CHECK(fs::exists(s.dir / "m" / "inventory.json"));
}

TEST_CASE("config precedence") {
  Scratch s;
  const auto cfg = s.write("cfg.json", R"({"epochs": 2, "hidden_size": 4, "embedding_size": 6,
      "batch_size": 4, "learning_rate": 0.01, "kernel_size": 3, "seed": 5,
      "split_ratios": [1.0, 0.0, 0.0]})");
  const auto r = tijere_run({"train", "--dataset", kApt29, "--config", cfg, "--epochs", "1",
                             "--out", s.path("t")});
  REQUIRE(r.code == cli::kOk);
  const auto rc = read_json(s.dir / "t" / "run_config.json");
  CHECK(rc["train"]["epochs"] == 1);
  CHECK(rc["model"]["hidden_dim"] == 4);
  CHECK(rc["model"]["embed_dim"] == 6);
  CHECK(rc["seed"] == 5);
  CHECK(rc["train"]["split_seed"] == 5);
  CHECK(rc["ignored_config_keys"] == json::array({"kernel_size"}));
  CHECK(r.err.find("kernel_size") != std::string::npos);

  const auto unknown = s.write("unknown.json", R"({"epochz": 2})");
  CHECK(tijere_run({"stats", "--dataset", kApt29, "--config", unknown}).code ==
        cli::kUsageError);
  const auto mistyped = s.write("mistyped.json", R"({"epochs": "two"})");
  CHECK(tijere_run({"stats", "--dataset", kApt29, "--config", mistyped}).code ==
        cli::kUsageError);
}

TEST_CASE("apply_config") {
  cli::RunConfig rc;
  cli::apply_config(rc, {{"dropout", 0.5}, {"optimizer", "AdamW"}, {"conv_layer", 1}});
  CHECK(rc.model.dropout == 0.5);
  CHECK(rc.ignored_keys == std::vector<std::string>{"conv_layer"});
  CHECK_THROWS_AS(cli::apply_config(rc, {{"optimizer", "SGD"}}), std::invalid_argument);
  CHECK_THROWS_AS(cli::apply_config(rc, json::array()), std::invalid_argument);
}

TEST_CASE("train, eval, extract, export") {
  Scratch s;
  const std::vector<std::string> small = {"--embed-dim", "8", "--hidden-dim", "4",
                                          "--epochs",    "2", "--lr",         "0.01"};
  auto train_args = std::vector<std::string>{"train", "--dataset", kReport, "--out", s.path("run")};
  train_args.insert(train_args.end(), small.begin(), small.end());
  REQUIRE(tijere_run(train_args).code == cli::kOk);
  for (const char* f : {"best.ckpt.json", "final.ckpt.json", "training_log.json",
                        "training_log.csv", "metrics.json", "split.json", "run_config.json"}) {
    CHECK_MESSAGE(fs::exists(s.dir / "run" / f), f);
  }
  const auto ckpt = s.path("run/best.ckpt.json");

  const auto ev = tijere_run({"eval", "--checkpoint", ckpt, "--dataset", kReport,
                              "--predicted-pairs", "--out", s.path("ev")});
  REQUIRE(ev.code == cli::kOk);
  const auto metrics = read_json(s.dir / "ev" / "metrics.json");
  CHECK(metrics.contains("ner"));
  CHECK(!metrics["re_predicted_pairs"].is_null());
  CHECK(ev.out.find("seed 42") != std::string::npos);

  REQUIRE(tijere_run({"extract", "--checkpoint", ckpt, "--dataset", kReport,
                      "--gold-spans", "--out", s.path("ex")})
              .code == cli::kOk);
  const auto extraction = read_json(s.dir / "ex" / "extraction.json");
  REQUIRE(extraction.size() == 3);
  CHECK(extraction[1]["entities"].size() == 4);

  const auto lines = s.write("in.txt", "Carbanak used Carbanak malware\n\n   \n");
  REQUIRE(tijere_run({"extract", "--checkpoint", ckpt, "--input", lines, "--out",
                      s.path("ex2")})
              .code == cli::kOk);
  CHECK(read_json(s.dir / "ex2" / "extraction.json").size() == 1);
  const auto blank = s.write("blank.txt", "\n");
  CHECK(tijere_run({"extract", "--checkpoint", ckpt, "--input", blank}).code ==
        cli::kDataError);
  CHECK(tijere_run({"extract", "--checkpoint", ckpt}).code == cli::kUsageError);
  CHECK(tijere_run({"extract", "--checkpoint", s.path("nope.json"), "--input", lines})
            .code == cli::kDataError);

  const auto input = s.path("ex/extraction.json");
  REQUIRE(tijere_run({"export", "--input", input, "--out", s.path("g")}).code == cli::kOk);
  const auto graph = read_json(s.dir / "g" / "graph.json");
  CHECK(graph.contains("nodes"));
  CHECK(graph.contains("edges"));
  const auto csv = tijere_run({"export", "--input", input, "--format", "csv"});
  CHECK(csv.code == cli::kOk);
  CHECK(csv.out.rfind("head,head_type,relation,tail,tail_type,confidence,sentence_id\n", 0) == 0);
  CHECK(tijere_run({"export", "--input", input, "--format", "dot"}).code == cli::kUsageError);
}

TEST_CASE("ablate writes one report per configuration") {
  Scratch s;
  const auto r = tijere_run({"ablate", "--dataset", kReport, "--embed-dim", "6",
                             "--hidden-dim", "3", "--epochs", "1", "--out", s.path("ab")});
  REQUIRE(r.code == cli::kOk);
  CHECK(read_json(s.dir / "ab" / "ablation.json")["rows"].size() == 4);
  for (const char* name : {"mask-off_type-off", "mask-on_type-off", "mask-off_type-on",
                           "mask-on_type-on"}) {
    CHECK_MESSAGE(fs::exists(s.dir / "ab" / (std::string("metrics_") + name + ".json")), name);
  }
  CHECK(fs::exists(s.dir / "ab" / "ablation.txt"));
}
