#include "ddd/dataset.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "ddd/random.hpp"

namespace ddd {

std::string to_string(Split split) {
  switch (split) {
    case Split::train: return "train";
    case Split::test: return "test";
    case Split::unassigned: break;
  }
  return "unassigned";
}

const DatasetRecord* Dataset::find(const std::string& id) const {
  const auto it = std::find_if(records.begin(), records.end(), [&](const DatasetRecord& r) { return r.id == id; });
  return it == records.end() ? nullptr : &*it;
}

std::vector<ScoreHistogram> Dataset::histograms() const {
  std::vector<ScoreHistogram> out;
  out.reserve(records.size());
  for (const DatasetRecord& r : records) out.push_back(r.histogram);
  return out;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

// Comma-separated when a comma is present, whitespace-separated otherwise.
std::vector<std::string_view> split_any(std::string_view line) {
  return line.find(',') != std::string_view::npos ? split_csv(line) : split_ws(line);
}

bool skippable(std::string_view line) {
  const std::string_view t = trim(line);
  return t.empty() || t.front() == '#';
}

template <typename Int>
std::optional<Int> parse_int(std::string_view s) {
  Int v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<double> parse_real(std::string_view s) {
  double v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

VoteCounts parse_counts(std::span<const std::string_view> fields, const std::string& source, std::size_t line) {
  VoteCounts counts(static_cast<Eigen::Index>(fields.size()));
  for (std::size_t k = 0; k < fields.size(); ++k) {
    const auto v = parse_int<std::int64_t>(fields[k]);
    if (!v || *v < 0) {
      throw ParseError(source, line, "vote count '" + std::string(fields[k]) + "' is not a non-negative integer");
    }
    counts(static_cast<Eigen::Index>(k)) = *v;
  }
  return counts;
}

ScoreHistogram histogram_or_throw(VoteCounts counts, int first_bin, const std::string& source, std::size_t line) {
  try {
    return ScoreHistogram::from_counts(std::move(counts), first_bin);
  } catch (const HistogramError& e) {
    throw ParseError(source, line, e.what());
  }
}

void require_unique(std::unordered_set<std::string>& seen, const std::string& id, const std::string& source,
                    std::size_t line) {
  if (id.empty()) throw ParseError(source, line, "empty id");
  if (!seen.insert(id).second) throw ParseError(source, line, "duplicate id '" + id + "'");
}

}  // namespace

// ---------------------------------------------------------------------------
// AVA

Dataset parse_ava(std::istream& in, const std::string& source) {
  constexpr std::size_t kFields = 15;
  Dataset ds;
  ds.name = source;
  ds.format = "ava";
  ds.bins = {1, 10};

  std::unordered_set<std::string> seen;
  std::string line;
  for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
    if (skippable(line)) continue;
    const auto fields = split_ws(line);
    if (fields.size() != kFields) {
      throw ParseError(source, line_no, fmt::format("expected {} fields, found {}", kFields, fields.size()));
    }
    for (std::size_t i : {std::size_t{0}, std::size_t{12}, std::size_t{13}, std::size_t{14}}) {
      if (!parse_int<std::int64_t>(fields[i])) {
        throw ParseError(source, line_no, "field " + std::to_string(i + 1) + " is not an integer");
      }
    }

    DatasetRecord rec;
    rec.id = std::string(fields[1]);
    require_unique(seen, rec.id, source, line_no);
    rec.histogram = histogram_or_throw(parse_counts(std::span(fields).subspan(2, 10), source, line_no), 1, source, line_no);
    rec.meta["row"] = std::string(fields[0]);
    rec.meta["tag1"] = std::string(fields[12]);
    rec.meta["tag2"] = std::string(fields[13]);
    rec.meta["challenge"] = std::string(fields[14]);

    const std::int64_t votes = rec.histogram.total_votes();
    if (votes < kAvaMinVotes || votes > kAvaMaxVotes) {
      rec.meta["flag"] = kFlagVoteRange;
      ds.warnings.push_back(fmt::format("{}:{}: image {} has {} votes, outside {}..{}", source, line_no, rec.id,
                                        votes, kAvaMinVotes, kAvaMaxVotes));
    }
    ds.records.push_back(std::move(rec));
  }
  return ds;
}

Dataset parse_ava(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  return parse_ava(in, path.string());
}

void write_ava(std::ostream& out, const Dataset& dataset) {
  const auto meta_or = [](const DatasetRecord& r, const char* key, const std::string& fallback) {
    const auto it = r.meta.find(key);
    return it == r.meta.end() ? fallback : it->second;
  };
  std::size_t row = 0;
  for (const DatasetRecord& r : dataset.records) {
    ++row;
    if (!r.histogram.counts() || r.histogram.size() != 10) {
      throw std::invalid_argument("record " + r.id + " has no 10-bin vote counts");
    }
    out << meta_or(r, "row", std::to_string(row)) << ' ' << r.id;
    for (std::int64_t c : *r.histogram.counts()) out << ' ' << c;
    out << ' ' << meta_or(r, "tag1", "0") << ' ' << meta_or(r, "tag2", "0") << ' '
        << meta_or(r, "challenge", "0") << '\n';
  }
}

// ---------------------------------------------------------------------------
// Photo.net and generic CSV

namespace {
Dataset parse_csv_rows(std::istream& in, int bins, const std::string& source, bool require_counts);
}  // namespace

Dataset parse_photonet(std::istream& in, const std::string& source) {
  Dataset ds = parse_csv_rows(in, 7, source, true);
  ds.format = "photonet";
  for (DatasetRecord& rec : ds.records) {
    if (rec.histogram.total_votes() < 10) {
      rec.meta["flag"] = kFlagFewVotes;
      ds.warnings.push_back(fmt::format("{}: image {} has only {} votes", source, rec.id, rec.histogram.total_votes()));
    }
  }
  if (ds.records.size() != kPhotonetFullSize) {
    ds.warnings.push_back(fmt::format("{}: {} records, the full collection has {}", source, ds.records.size(),
                                      kPhotonetFullSize));
  }
  return ds;
}

Dataset parse_photonet(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  return parse_photonet(in, path.string());
}

namespace {

Dataset parse_csv_rows(std::istream& in, int bins, const std::string& source, bool require_counts) {
  Dataset ds;
  ds.name = source;
  ds.format = "csv";
  if (bins != 0) ds.bins = BinRange::with_size(bins);

  std::unordered_set<std::string> seen;
  std::string line;
  bool first_row = true;
  for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
    if (skippable(line)) continue;
    const auto fields = split_csv(line);
    if (first_row && fields.front() == "id") {
      first_row = false;
      continue;
    }
    first_row = false;

    if (bins == 0) {
      if (fields.size() < 3) throw ParseError(source, line_no, "a histogram row needs an id and at least two bins");
      bins = static_cast<int>(fields.size()) - 1;
      ds.bins = BinRange::with_size(bins);
    }
    if (fields.size() != static_cast<std::size_t>(bins) + 1) {
      throw ParseError(source, line_no, fmt::format("expected {} fields, found {}", bins + 1, fields.size()));
    }

    DatasetRecord rec;
    rec.id = std::string(fields[0]);
    require_unique(seen, rec.id, source, line_no);
    const auto values = std::span(fields).subspan(1);
    const bool integral = std::all_of(values.begin(), values.end(), [](std::string_view f) {
      return !f.empty() && f.find_first_not_of("0123456789") == std::string_view::npos;
    });
    if (!integral && require_counts) throw ParseError(source, line_no, "vote counts must be integers");
    if (integral) {
      rec.histogram = histogram_or_throw(parse_counts(values, source, line_no), 1, source, line_no);
    } else {
      Pmf weights(bins);
      for (int k = 0; k < bins; ++k) {
        const auto v = parse_real(values[static_cast<std::size_t>(k)]);
        if (!v || *v < 0.0) {
          throw ParseError(source, line_no, "'" + std::string(values[static_cast<std::size_t>(k)]) +
                                                "' is not a non-negative number");
        }
        weights(k) = *v;
      }
      try {
        rec.histogram = ScoreHistogram::from_weights(std::move(weights), 1);
      } catch (const HistogramError& e) {
        throw ParseError(source, line_no, e.what());
      }
    }
    ds.records.push_back(std::move(rec));
  }
  return ds;
}

}  // namespace

Dataset parse_histogram_csv(std::istream& in, int bins, const std::string& source) {
  return parse_csv_rows(in, bins, source, false);
}

Dataset parse_histogram_csv(const std::filesystem::path& path, int bins) {
  std::ifstream in = open_input(path);
  return parse_histogram_csv(in, bins, path.string());
}

void write_counts_csv(std::ostream& out, const Dataset& dataset) {
  for (const DatasetRecord& r : dataset.records) {
    if (!r.histogram.counts()) throw std::invalid_argument("record " + r.id + " has no vote counts");
    out << r.id;
    for (std::int64_t c : *r.histogram.counts()) out << ',' << c;
    out << '\n';
  }
}

void write_pmf_csv(std::ostream& out, const std::vector<std::pair<std::string, ScoreHistogram>>& rows) {
  for (const auto& [id, h] : rows) {
    out << id;
    for (double p : h.pmf()) out << fmt::format(",{:.6f}", p);
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Splits

Dataset apply_split(Dataset dataset, std::istream& split_file, const std::string& source) {
  std::unordered_map<std::string, std::pair<Split, std::size_t>> labels;
  std::vector<std::string> order;
  std::string line;
  for (std::size_t line_no = 1; std::getline(split_file, line); ++line_no) {
    if (skippable(line)) continue;
    const auto fields = split_any(line);
    if (fields.size() != 2) throw ParseError(source, line_no, "expected `id,train|test`");
    Split split;
    if (fields[1] == "train") {
      split = Split::train;
    } else if (fields[1] == "test") {
      split = Split::test;
    } else {
      throw ParseError(source, line_no, "unknown split label '" + std::string(fields[1]) + "'");
    }
    const std::string id(fields[0]);
    const auto [it, inserted] = labels.try_emplace(id, split, line_no);
    if (inserted) {
      order.push_back(id);
    } else if (it->second.first != split) {
      throw ParseError(source, line_no,
                       fmt::format("id '{}' labelled both {} and {} (first at line {})", id,
                                   to_string(it->second.first), to_string(split), it->second.second));
    }
  }

  std::unordered_set<std::string> present;
  for (DatasetRecord& rec : dataset.records) {
    present.insert(rec.id);
    const auto it = labels.find(rec.id);
    rec.split = it == labels.end() ? Split::unassigned : it->second.first;
  }
  for (const std::string& id : order) {
    if (!present.contains(id)) dataset.warnings.push_back(source + ": split id '" + id + "' not in dataset");
  }
  return dataset;
}

Dataset apply_split(Dataset dataset, const std::filesystem::path& split_path) {
  std::ifstream in = open_input(split_path);
  return apply_split(std::move(dataset), in, split_path.string());
}

// ---------------------------------------------------------------------------
// Parameter interchange

std::vector<ParamRow> parse_params_csv(std::istream& in, const std::string& source) {
  std::vector<ParamRow> rows;
  std::unordered_set<std::string> seen;
  std::string line;
  bool first_row = true;
  for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
    if (skippable(line)) continue;
    const auto fields = split_csv(line);
    if (first_row && fields.front() == "id") {
      first_row = false;
      continue;
    }
    first_row = false;
    if (fields.size() < 3) throw ParseError(source, line_no, "expected `id,m,n`");
    const auto m = parse_int<int>(fields[1]);
    const auto n = parse_int<int>(fields[2]);
    if (!m || !n || *m < 0 || *n < 0) throw ParseError(source, line_no, "m and n must be non-negative integers");
    ParamRow row{std::string(fields[0]), *m, *n};
    require_unique(seen, row.id, source, line_no);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ParamRow> parse_params_csv(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  return parse_params_csv(in, path.string());
}

void write_params_csv(std::ostream& out, const std::vector<ParamRow>& rows) {
  for (const ParamRow& r : rows) out << r.id << ',' << r.m << ',' << r.n << '\n';
}

// ---------------------------------------------------------------------------
// Synthetic data

SynthSpec SynthSpec::full_grid(int m_max, int n_max, double scale, std::int64_t raters, int count, int bins) {
  SynthSpec spec;
  spec.bins = bins;
  for (int m = 0; m <= m_max; ++m) {
    for (int n = 0; n <= n_max; ++n) spec.cells.push_back({m, n, scale, raters, count});
  }
  return spec;
}

SynthDataset synth_dataset(const SynthSpec& spec, std::uint64_t seed) {
  SynthDataset out;
  out.dataset.name = "synth";
  out.dataset.format = "synth";
  out.dataset.bins = BinRange::with_size(spec.bins);

  SimConfig cfg = SimConfig::for_bins(spec.bins);
  for (std::size_t c = 0; c < spec.cells.size(); ++c) {
    const SynthCell& cell = spec.cells[c];
    if (cell.count < 0) throw std::invalid_argument("synthetic cell count must be non-negative");
    const DddParams params{cell.m, cell.n, cell.scale};
    params.validate(cell.m, cell.n);
    cfg.raters = cell.raters;
    for (int i = 0; i < cell.count; ++i) {
      cfg.seed = derive_seed({seed, c, static_cast<std::uint64_t>(i)});
      DatasetRecord rec;
      rec.id = fmt::format("synth_c{:02}_m{}_n{}_{:03}", c, cell.m, cell.n, i);
      rec.histogram = simulate_histogram(params, cfg);
      out.truth.push_back({rec.id, cell.m, cell.n});
      out.dataset.records.push_back(std::move(rec));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Manifest

namespace {

class Fnv1a {
 public:
  void bytes(const void* data, std::size_t size) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
      hash_ ^= p[i];
      hash_ *= 0x100000001b3ULL;
    }
  }
  void text(std::string_view s) {
    const std::uint64_t n = s.size();
    bytes(&n, sizeof n);
    bytes(s.data(), s.size());
  }
  template <typename T>
  void value(T v) {
    bytes(&v, sizeof v);
  }
  [[nodiscard]] std::uint64_t digest() const noexcept { return hash_; }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

}  // namespace

DatasetManifest make_manifest(const Dataset& dataset) {
  DatasetManifest m;
  m.name = dataset.name;
  m.bins = dataset.bins.size();
  m.scale = dataset.bins;
  m.records = dataset.records.size();
  m.format = dataset.format;

  Fnv1a h;
  for (const DatasetRecord& r : dataset.records) {
    switch (r.split) {
      case Split::train: ++m.train; break;
      case Split::test: ++m.test; break;
      case Split::unassigned: ++m.unassigned; break;
    }
    h.text(r.id);
    h.value(static_cast<int>(r.split));
    h.value(r.histogram.bins().first);
    for (double p : r.histogram.pmf()) h.value(std::bit_cast<std::uint64_t>(p));
    if (r.histogram.counts()) {
      for (std::int64_t c : *r.histogram.counts()) h.value(c);
    }
    for (const auto& [k, v] : r.meta) {
      h.text(k);
      h.text(v);
    }
  }
  m.content_hash = fmt::format("{:016x}", h.digest());
  return m;
}

std::string manifest_json(const DatasetManifest& m) {
  nlohmann::ordered_json j;
  j["name"] = m.name;
  j["format"] = m.format;
  j["bins"] = m.bins;
  j["scale_range"] = {m.scale.first, m.scale.last};
  j["records"] = m.records;
  j["splits"] = {{"train", m.train}, {"test", m.test}, {"unassigned", m.unassigned}};
  j["content_hash"] = m.content_hash;
  return j.dump(2) + "\n";
}

}  // namespace ddd
