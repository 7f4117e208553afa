#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kgmat/embedder.hpp"
#include "kgmat/evaluator.hpp"
#include "kgmat/materializer.hpp"
#include "kgmat/walker.hpp"

namespace kgmat::cli {

namespace fs = std::filesystem;

enum ExitStatus : int { kSuccess = 0, kRuntimeFailure = 1, kUsageError = 2 };

/// Bad arguments, bad configuration, or missing inputs. Maps to exit 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Runs `body`, reporting any exception on stderr and mapping it to an exit
/// status: usage and input-data errors give 2, everything else 1.
int run_guarded(const std::function<void()>& body);

/// Stage seed derived from the global seed and a stable stage tag.
std::uint64_t stage_seed(std::uint64_t global_seed, std::string_view stage) noexcept;

inline constexpr std::string_view kEvalTasks[] = {"classification", "regression", "similarity", "relatedness",
                                                  "docsim"};

struct PipelineConfig {
  fs::path graph;
  std::optional<fs::path> tbox;
  fs::path output_dir = "kgmat-out";
  std::uint64_t global_seed = 1;
  WalkConfig walk;
  TrainConfig train;
  std::optional<std::uint64_t> walk_seed;
  std::optional<std::uint64_t> train_seed;
  std::optional<std::uint64_t> eval_seed;
  std::size_t folds = kDefaultFolds;
  std::size_t top_k = 10;
  std::vector<std::pair<std::string, fs::path>> datasets;  // (task, path)

  std::uint64_t effective_walk_seed() const { return walk_seed.value_or(stage_seed(global_seed, "walk")); }
  std::uint64_t effective_train_seed() const { return train_seed.value_or(stage_seed(global_seed, "train")); }
  std::uint64_t effective_eval_seed() const { return eval_seed.value_or(stage_seed(global_seed, "eval")); }

  /// Checks value ranges and that every referenced input exists.
  void validate() const;
};

/// `key = value` lines under `[section]` headers; `#` and `;` start comments.
/// Relative paths resolve against `base_dir`.
PipelineConfig parse_pipeline_config(std::istream& in, const fs::path& base_dir);
PipelineConfig load_pipeline_config(const fs::path& path);

MaterializationReport cmd_materialize(const fs::path& graph, const std::optional<fs::path>& tbox,
                                      const fs::path& out, const fs::path& report);
void cmd_walk(const fs::path& graph, const WalkConfig& cfg, const fs::path& out);
void cmd_train(const fs::path& corpus, const TrainConfig& cfg, const fs::path& out);
EvalReport cmd_eval(const fs::path& embeddings, std::string_view task, const fs::path& dataset,
                    const fs::path& out, std::size_t folds, std::uint64_t seed);
void cmd_compare(const fs::path& original, const fs::path& enriched, const WalkConfig& cfg, std::size_t top_k,
                 const fs::path& out, const std::optional<fs::path>& csv);

/// Runs materialize -> walk -> train -> eval -> compare and writes
/// manifest.txt. Returns the manifest path.
fs::path cmd_pipeline(const PipelineConfig& cfg);

/// FNV-1a 64 of a file's bytes, hex encoded.
std::string file_hash(const fs::path& path);

}  // namespace kgmat::cli
