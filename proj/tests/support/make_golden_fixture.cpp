// Writes the golden fixture files, and the golden report built from them,
// into the given directory.
#include <filesystem>
#include <fstream>
#include <iostream>

#include "golden_fixture.hpp"
#include "skillcompat/analysis/report.hpp"
#include "skillcompat/focal/factory.hpp"
#include "skillcompat/frameworks/record_io.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_golden_fixture <dir>\n";
    return 2;
  }
  namespace fs = std::filesystem;
  const fs::path dir(argv[1]);
  fs::create_directories(dir);
  const auto fx = skillcompat::testing::make_golden_fixture();
  using skillcompat::testing::GoldenFixture;
  std::ofstream(dir / "stt_expector.jsonl", std::ios::binary) << GoldenFixture::jsonl(fx.stt_expector);
  std::ofstream(dir / "stt_tree.jsonl", std::ios::binary) << GoldenFixture::jsonl(fx.stt_tree);
  std::ofstream(dir / "hb.jsonl", std::ios::binary) << GoldenFixture::jsonl(fx.hb);
  std::ofstream(dir / "eval_table.tsv", std::ios::binary) << fx.table_tsv();

  const auto report = skillcompat::testing::golden_report(dir);
  fs::create_directories(dir / "report");
  std::ofstream(dir / "report" / "report.txt", std::ios::binary) << report.text;
  for (const auto& [name, body] : report.files) std::ofstream(dir / "report" / name, std::ios::binary) << body;
  return 0;
}
