// Writes the bundled synthetic benchmark corpus (loghub structured-CSV
// layout, 16 sources) plus optional toy and throughput inputs.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "uniparser/synthetic.hpp"

namespace fs = std::filesystem;
using namespace uniparser;

int main(int argc, char** argv) {
  CLI::App app{"uniparser-datagen: deterministic synthetic log corpora"};

  std::string out;
  int rows = 2000;
  std::uint64_t seed = 7;
  int toy_rows = 0;
  int throughput_rows = 0;
  app.add_option("--out", out, "Output directory")->required();
  app.add_option("--rows", rows, "Messages per source")->capture_default_str();
  app.add_option("--seed", seed, "Master RNG seed")->capture_default_str();
  app.add_option("--toy", toy_rows, "Also write a Toy source with this many messages");
  app.add_option("--throughput", throughput_rows,
                 "Also write throughput.log with this many raw lines");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const fs::path root(out);
    write_benchmark_corpus(root, rows, seed);
    std::cerr << "wrote 16 sources x " << rows << " rows under " << root.string() << "\n";
    if (toy_rows > 0) {
      const fs::path dir = root / "Toy";
      fs::create_directories(dir);
      write_structured_csv(dir / "Toy_2k.log_structured.csv", toy_corpus(toy_rows, seed));
      std::cerr << "wrote Toy source with " << toy_rows << " rows\n";
    }
    if (throughput_rows > 0) {
      std::ofstream lines(root / "throughput.log", std::ios::binary);
      if (!lines) throw DataError("cannot open throughput.log for writing");
      for (const std::string& line : throughput_lines(throughput_rows, seed)) lines << line << '\n';
      std::cerr << "wrote throughput.log with " << throughput_rows << " lines\n";
    }
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
