#include <benchmark/benchmark.h>

#include <random>

#include "gazegram/autodetect.hpp"
#include "gazegram/encoding.hpp"
#include "gazegram/layout.hpp"
#include "gazegram/mining.hpp"

using namespace gazegram;

namespace {

std::string random_symbols(std::mt19937_64& rng, std::string_view alphabet, std::size_t len) {
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::string s(len, ' ');
  for (auto& c : s) c = alphabet[pick(rng)];
  return s;
}

// Runs of 1..20 repeats, like fixation dwell.
std::string dwell_string(std::mt19937_64& rng, std::size_t len) {
  std::uniform_int_distribution<int> run(1, 20);
  std::string out;
  while (out.size() < len) {
    const auto c = random_symbols(rng, "ABCDEFGH.", 1)[0];
    out.append(static_cast<std::size_t>(run(rng)), c);
  }
  out.resize(len);
  return out;
}

}  // namespace

static void BM_RleEncode(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const EncodedSequence seq{"P", dwell_string(rng, static_cast<std::size_t>(state.range(0)))};
  for (auto _ : state) benchmark::DoNotOptimize(rle_encode(seq));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RleEncode)->Arg(1000)->Arg(100000);

static void BM_ExtractNgrams(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const auto s = random_symbols(rng, "ABCDEFGHIJKL", static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(extract_ngrams(s, 3));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ExtractNgrams)->Arg(1000)->Arg(100000);

static void BM_DetectAois(benchmark::State& state) {
  const int z = static_cast<int>(state.range(0));
  RgbImage img(1280, 960);
  img.fill_rect({100, 80, 300, 200}, 200, 30, 30);
  img.fill_rect({600, 100, 400, 250}, 30, 30, 200);
  img.fill_rect({150, 500, 500, 300}, 30, 160, 30);
  img.fill_rect({800, 550, 300, 300}, 90, 90, 90);
  for (auto _ : state) benchmark::DoNotOptimize(detect_aois(img, {z, 4}));
}
BENCHMARK(BM_DetectAois)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_RunLayout(benchmark::State& state) {
  std::vector<Rect> rects;
  for (int i = 0; i < 8; ++i) rects.push_back({(i % 4) * 250, (i / 4) * 250, 200, 200});
  const auto tree = AoiTree::from_rects(rects);
  const auto cut = cut_at_level(tree, Level{1});
  std::mt19937_64 rng(3);
  std::vector<SelectedPattern> patterns;
  for (int i = 0; i < state.range(0) / 4; ++i) {
    std::string chars;
    while (chars.size() < 4) {
      const char c = random_symbols(rng, "ABCDEFGH", 1)[0];
      if (chars.empty() || chars.back() != c) chars.push_back(c);
    }
    patterns.push_back({chars, 1.0});
  }
  const auto graph = build_graph(patterns, cut, 1);
  for (auto _ : state) benchmark::DoNotOptimize(run_layout(graph, LayoutParams{}));
}
BENCHMARK(BM_RunLayout)->Arg(8)->Arg(40)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
