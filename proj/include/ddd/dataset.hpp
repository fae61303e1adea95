#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ddd/histogram.hpp"
#include "ddd/simulator.hpp"

namespace ddd {

/// Malformed input; carries the 1-based line number of the offending row.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A file could not be opened or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Split { unassigned, train, test };

std::string to_string(Split split);

struct DatasetRecord {
  std::string id;
  ScoreHistogram histogram;
  Split split = Split::unassigned;
  std::map<std::string, std::string> meta;

  friend bool operator==(const DatasetRecord&, const DatasetRecord&) = default;
};

struct Dataset {
  std::string name;
  std::string format;  // "ava", "photonet", "csv" or "synth"
  BinRange bins;
  std::vector<DatasetRecord> records;
  std::vector<std::string> warnings;

  [[nodiscard]] const DatasetRecord* find(const std::string& id) const;
  [[nodiscard]] std::vector<ScoreHistogram> histograms() const;
};

// Flag values written into DatasetRecord::meta["flag"].
inline constexpr const char* kFlagVoteRange = "vote_count_out_of_range";
inline constexpr const char* kFlagFewVotes = "fewer_than_10_votes";

inline constexpr std::int64_t kAvaMinVotes = 78;
inline constexpr std::int64_t kAvaMaxVotes = 549;
inline constexpr std::size_t kPhotonetFullSize = 15582;

/// AVA.txt layout: row index, image id, ten vote counts, two tag ids, challenge id,
/// whitespace separated. Vote totals outside 78..549 are flagged, not rejected.
Dataset parse_ava(std::istream& in, const std::string& source = "ava");
Dataset parse_ava(const std::filesystem::path& path);
void write_ava(std::ostream& out, const Dataset& dataset);

/// `id,c1,...,c7` rows; fewer than ten votes is flagged.
Dataset parse_photonet(std::istream& in, const std::string& source = "photonet");
Dataset parse_photonet(const std::filesystem::path& path);

/// Generic `id,c1,...,cK` rows. Integer fields are read as vote counts; any
/// real-valued field makes the row a pmf (renormalized). Blank lines, `#`
/// comments and an `id,...` header are skipped. bins = 0 infers K from the first row.
Dataset parse_histogram_csv(std::istream& in, int bins = 0, const std::string& source = "csv");
Dataset parse_histogram_csv(const std::filesystem::path& path, int bins = 0);

/// `id,c1,...,cK` with integer counts; records without counts are rejected.
void write_counts_csv(std::ostream& out, const Dataset& dataset);

/// `id,p1,...,pK` with six decimals.
void write_pmf_csv(std::ostream& out, const std::vector<std::pair<std::string, ScoreHistogram>>& rows);

/// Split file rows `id,train|test` (comma or whitespace separated). Ids not
/// listed stay unassigned; listed ids missing from the dataset become warnings.
Dataset apply_split(Dataset dataset, std::istream& split_file, const std::string& source = "split");
Dataset apply_split(Dataset dataset, const std::filesystem::path& split_path);

/// Predicted-parameter interchange: `id,m,n` rows.
struct ParamRow {
  std::string id;
  int m = 0;
  int n = 0;

  friend bool operator==(const ParamRow&, const ParamRow&) = default;
};

std::vector<ParamRow> parse_params_csv(std::istream& in, const std::string& source = "params");
std::vector<ParamRow> parse_params_csv(const std::filesystem::path& path);
void write_params_csv(std::ostream& out, const std::vector<ParamRow>& rows);

/// Synthetic benchmark description: one entry per (m, n) cell.
struct SynthCell {
  int m = 0;
  int n = 0;
  double scale = 1.0;
  std::int64_t raters = 10000;
  int count = 10;
};

struct SynthSpec {
  std::vector<SynthCell> cells;
  int bins = 10;

  /// Every (m, n) in [0, m_max] x [0, n_max] with the same scale, raters and count.
  static SynthSpec full_grid(int m_max, int n_max, double scale, std::int64_t raters, int count, int bins = 10);
};

struct SynthDataset {
  Dataset dataset;
  std::vector<ParamRow> truth;
};

/// Deterministic in (spec, seed): every image draws from its own derived seed.
SynthDataset synth_dataset(const SynthSpec& spec, std::uint64_t seed);

struct DatasetManifest {
  std::string name;
  int bins = 0;
  BinRange scale;
  std::size_t records = 0;
  std::size_t train = 0;
  std::size_t test = 0;
  std::size_t unassigned = 0;
  std::string format;
  std::string content_hash;  // FNV-1a 64 over ids, splits, counts and pmf bits
};

DatasetManifest make_manifest(const Dataset& dataset);
std::string manifest_json(const DatasetManifest& manifest);

std::ofstream open_output(const std::filesystem::path& path);
std::ifstream open_input(const std::filesystem::path& path);

}  // namespace ddd
