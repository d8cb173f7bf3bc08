// Copyright 2026 The geoad-audit Authors
// SPDX-License-Identifier: Apache-2.0

#include "geoad/cli.h"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "geoad/community.h"
#include "geoad/csv.h"
#include "geoad/demographics.h"
#include "geoad/error.h"
#include "geoad/export_report.h"
#include "geoad/ingest.h"
#include "geoad/similarity_graph.h"

namespace geoad::cli {
namespace fs = std::filesystem;

namespace {

std::string Trim(std::string_view text) {
  auto begin = text.find_first_not_of(" \t");
  if (begin == std::string_view::npos) return {};
  auto end = text.find_last_not_of(" \t");
  return std::string(text.substr(begin, end - begin + 1));
}

bool ParseBool(const std::string& key, const std::string& value) {
  std::string lower;
  for (char c : value) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "true" || lower == "yes" || lower == "1") return true;
  if (lower == "false" || lower == "no" || lower == "0") return false;
  throw UsageError("config key '" + key + "' expects a boolean, got '" + value + "'");
}

template <typename T>
T ParseNumber(const std::string& key, const std::string& value) {
  if constexpr (std::is_floating_point_v<T>) {
    if (auto parsed = csv::ParseReal(value)) return static_cast<T>(*parsed);
  } else {
    if (auto parsed = csv::ParseUnsigned(value)) return static_cast<T>(*parsed);
  }
  throw UsageError("config key '" + key + "' expects a number, got '" + value + "'");
}

RankBy ParseRankBy(const std::string& value) {
  if (value == "visibility") return RankBy::kVisibility;
  if (value == "traffic") return RankBy::kTraffic;
  throw UsageError("rank-by must be 'visibility' or 'traffic', got '" + value + "'");
}

std::vector<std::string> SplitList(const std::string& value) {
  std::vector<std::string> items;
  std::stringstream stream(value);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (auto trimmed = Trim(item); !trimmed.empty()) items.push_back(trimmed);
  }
  return items;
}

std::ifstream OpenInput(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw AuditError("cannot open input file " + path.string());
  return in;
}

void WriteFile(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << contents;
  if (!out) throw AuditError("cannot write " + path.string());
}

template <typename Writer>
void WriteFileWith(const fs::path& path, Writer&& writer) {
  std::ostringstream buffer;
  writer(buffer);
  WriteFile(path, buffer.str());
}

std::string FormatReport(const ValidationReport& report) {
  std::ostringstream text;
  for (const auto& zip : report.missing_demographics) {
    text << "missing_demographics " << zip << '\n';
  }
  for (const auto& zip : report.unused_demographics) {
    text << "unused_demographics " << zip << '\n';
  }
  if (report.dropped_records > 0) {
    text << "dropped_records " << report.dropped_records << '\n';
  }
  return text.str();
}

// Everything a subcommand needs once inputs are loaded.
struct Session {
  const RunConfig& config;
  Dataset dataset;
  ShareVector baseline;
  std::optional<nlohmann::ordered_json> boundaries;
  std::map<std::string, std::string> directories;  // keyword -> dir name
};

// Messages produced while processing one keyword, replayed in keyword order.
struct KeywordLog {
  std::vector<std::string> warnings;
  std::optional<std::string> error;
};

fs::path KeywordDir(const Session& session, const std::string& keyword) {
  fs::path dir = session.config.out_dir / session.directories.at(keyword);
  fs::create_directories(dir);
  return dir;
}

void RequireKeyword(const Session& session, const std::string& keyword) {
  if (!session.dataset.HasKeyword(keyword)) {
    throw AuditError("unknown keyword '" + keyword + "'");
  }
}

void RunGraph(const Session& session, const std::string& keyword, unsigned jobs) {
  const auto& config = session.config;
  const auto graph = BuildGraph(session.dataset, keyword,
                                {config.normalize_traffic, jobs});
  const auto dir = KeywordDir(session, keyword);
  WriteFileWith(dir / "edges.csv", [&](std::ostream& o) { WriteEdgeList(o, graph); });
  const auto histogram = WeightHistogram(graph, config.bins);
  WriteFileWith(dir / "histogram.csv",
                [&](std::ostream& o) { WriteHistogram(o, histogram); });
}

void RunCommunities(const Session& session, const std::string& keyword,
                    unsigned jobs) {
  const auto& config = session.config;
  const auto graph = BuildGraph(session.dataset, keyword,
                                {config.normalize_traffic, jobs});
  LeidenOptions options;
  options.resolution = config.resolution;
  options.seed = config.seed;
  options.max_iterations = config.max_iterations;
  const auto partition = LeidenPartition(graph, options);
  const auto communities = ClusterDemographics(graph, partition, session.dataset);

  const auto dir = KeywordDir(session, keyword);
  WriteFileWith(dir / "partition.csv",
                [&](std::ostream& o) { WritePartition(o, graph, partition); });
  WriteFileWith(dir / "communities.csv", [&](std::ostream& o) {
    WriteCommunityDemographics(o, communities);
  });
  if (session.boundaries) {
    const auto document = BuildChoropleth(session.dataset, *session.boundaries,
                                          CommunityOverlay(graph, partition));
    WriteFileWith(dir / "communities.geojson",
                  [&](std::ostream& o) { WriteChoropleth(o, document); });
    WriteFileWith(dir / "communities_missing.txt",
                  [&](std::ostream& o) { WriteMissingBoundaries(o, document); });
  }
}

void RunProfiles(const Session& session, const std::string& keyword,
                 KeywordLog& log) {
  const auto& config = session.config;
  const auto profiles = ProfileKeyword(session.dataset, keyword, session.baseline,
                                       {config.theta, config.rank_by});
  const auto shortfalls = std::count_if(
      profiles.begin(), profiles.end(),
      [](const DomainProfile& p) { return p.shortfall; });
  if (shortfalls > 0) {
    log.warnings.push_back("keyword '" + keyword + "': " +
                           std::to_string(shortfalls) + " of " +
                           std::to_string(profiles.size()) +
                           " domains bid on fewer than " +
                           std::to_string(config.theta) + " zipcodes");
  }
  const auto dir = KeywordDir(session, keyword);
  WriteFileWith(dir / "domains.csv", [&](std::ostream& o) {
    WriteDomainTable(o, profiles, TableFormat::kCsv);
  });
  WriteFileWith(dir / "domains.json", [&](std::ostream& o) {
    WriteDomainTable(o, profiles, TableFormat::kJson);
  });
  const auto top = TopDomainsByCategory(profiles, config.top_n);
  WriteFileWith(dir / "top_domains.csv",
                [&](std::ostream& o) { WriteTopDomains(o, top); });
}

void RunMap(const Session& session, const std::string& keyword) {
  const auto& config = session.config;
  std::vector<std::string> domains = config.domains;
  if (domains.empty()) {
    // Default to the leading domain of each category.
    const auto profiles = ProfileKeyword(session.dataset, keyword,
                                         session.baseline,
                                         {config.theta, config.rank_by});
    const auto top = TopDomainsByCategory(profiles, 1);
    for (const auto* column : {&top.white, &top.black, &top.asian}) {
      if (!column->empty() &&
          std::find(domains.begin(), domains.end(), column->front().domain) ==
              domains.end()) {
        domains.push_back(column->front().domain);
      }
    }
  }
  std::vector<DomainProfile> profiles;
  for (const auto& domain : domains) {
    profiles.push_back(ProfileDomain(session.dataset, keyword, domain,
                                     session.baseline,
                                     {config.theta, config.rank_by}));
  }
  const auto document = BuildChoropleth(session.dataset, *session.boundaries,
                                        ProfileOverlay(profiles));
  const auto dir = KeywordDir(session, keyword);
  WriteFileWith(dir / "map.geojson",
                [&](std::ostream& o) { WriteChoropleth(o, document); });
  WriteFileWith(dir / "map_missing.txt",
                [&](std::ostream& o) { WriteMissingBoundaries(o, document); });
}

void RunAll(const Session& session, std::ostream& out, std::ostream& err,
            bool& failed) {
  std::vector<std::string> keywords;
  if (session.config.keyword) {
    RequireKeyword(session, *session.config.keyword);
    keywords.push_back(*session.config.keyword);
  } else {
    keywords = session.dataset.keywords();
  }

  std::vector<KeywordLog> logs(keywords.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < keywords.size(); i = next++) {
      try {
        RunGraph(session, keywords[i], 1);
        RunCommunities(session, keywords[i], 1);
        RunProfiles(session, keywords[i], logs[i]);
      } catch (const std::exception& e) {
        logs[i].error = e.what();
      }
    }
  };
  const std::size_t workers =
      std::clamp<std::size_t>(session.config.jobs, 1, keywords.size());
  {
    std::vector<std::jthread> threads;
    for (std::size_t w = 1; w < workers; ++w) threads.emplace_back(worker);
    worker();
  }

  std::ostringstream index;
  index << "keyword,directory\n";
  for (std::size_t i = 0; i < keywords.size(); ++i) {
    index << csv::EscapeField(keywords[i]) << ','
          << session.directories.at(keywords[i]) << '\n';
    for (const auto& warning : logs[i].warnings) err << "warning: " << warning << '\n';
    if (logs[i].error) {
      err << "error: keyword '" << keywords[i] << "': " << *logs[i].error << '\n';
      failed = true;
    } else {
      out << keywords[i] << " -> " << session.directories.at(keywords[i]) << '\n';
    }
  }
  WriteFile(session.config.out_dir / "keywords.csv", index.str());
}

struct Flags {
  std::string config;
  std::string ads, demographics, boundaries, keyword, out, rank_by;
  std::size_t theta = 0, bins = 0, top_n = 0, max_iterations = 0;
  double resolution = 0;
  std::uint64_t seed = 0;
  unsigned jobs = 0;
  bool strict = false, normalize = false;
  std::vector<std::string> domains;
  std::string positional_keyword;
};

}  // namespace

void ApplyConfigText(std::istream& in, const fs::path& base_dir,
                     RunConfig& config) {
  auto resolve = [&](const std::string& value) {
    fs::path path(value);
    return path.is_relative() ? base_dir / path : path;
  };
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto equals = line.find('=');
    if (equals == std::string::npos) {
      throw UsageError("config line " + std::to_string(line_number) +
                       ": expected key = value");
    }
    std::string key = Trim(std::string_view(line).substr(0, equals));
    std::replace(key.begin(), key.end(), '-', '_');
    const std::string value = Trim(std::string_view(line).substr(equals + 1));

    if (key == "ads") config.ads_path = resolve(value);
    else if (key == "demographics") config.demographics_path = resolve(value);
    else if (key == "boundaries") config.boundaries_path = resolve(value);
    else if (key == "keyword") config.keyword = value;
    else if (key == "theta") config.theta = ParseNumber<std::size_t>(key, value);
    else if (key == "resolution") config.resolution = ParseNumber<double>(key, value);
    else if (key == "seed") config.seed = ParseNumber<std::uint64_t>(key, value);
    else if (key == "out") config.out_dir = resolve(value);
    else if (key == "strict") config.strict = ParseBool(key, value);
    else if (key == "rank_by") config.rank_by = ParseRankBy(value);
    else if (key == "normalize_traffic") config.normalize_traffic = ParseBool(key, value);
    else if (key == "jobs") config.jobs = ParseNumber<unsigned>(key, value);
    else if (key == "bins") config.bins = ParseNumber<std::size_t>(key, value);
    else if (key == "top") config.top_n = ParseNumber<std::size_t>(key, value);
    else if (key == "max_iterations") config.max_iterations = ParseNumber<std::size_t>(key, value);
    else if (key == "domains") config.domains = SplitList(value);
    else throw UsageError("unknown config key '" + key + "'");
  }
}

void CheckConfig(const RunConfig& config) {
  if (config.ads_path.empty()) throw UsageError("missing --ads");
  if (config.demographics_path.empty()) throw UsageError("missing --demographics");
  if (config.theta < 1) throw UsageError("theta must be at least 1");
  if (!(config.resolution > 0.0)) throw UsageError("resolution must be positive");
  if (config.jobs < 1) throw UsageError("jobs must be at least 1");
  if (config.bins < 1) throw UsageError("bins must be at least 1");
  if (config.top_n < 1) throw UsageError("top must be at least 1");
  if (config.max_iterations < 1) throw UsageError("max-iterations must be at least 1");
}

std::vector<std::pair<std::string, std::string>> KeywordDirectories(
    std::span<const std::string> keywords) {
  std::vector<std::string> sorted(keywords.begin(), keywords.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  std::vector<std::pair<std::string, std::string>> result;
  std::set<std::string> used;
  for (const auto& keyword : sorted) {
    std::string slug;
    for (unsigned char c : keyword) {
      if (std::isalnum(c)) {
        slug += static_cast<char>(std::tolower(c));
      } else if (!slug.empty() && slug.back() != '-') {
        slug += '-';
      }
    }
    while (!slug.empty() && slug.back() == '-') slug.pop_back();
    if (slug.empty()) slug = "keyword";
    std::string name = slug;
    for (int suffix = 2; used.contains(name); ++suffix) {
      name = slug + "-" + std::to_string(suffix);
    }
    used.insert(name);
    result.emplace_back(keyword, name);
  }
  return result;
}

int Run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Audit geographically targeted advertising for demographic bias.",
               "geoad-audit"};
  Flags flags;
  app.add_option("--config", flags.config,
                 std::string("key=value config file (default: $") + kConfigEnvVar + ")");
  auto* ads = app.add_option("--ads", flags.ads, "ad records CSV");
  auto* demographics = app.add_option("--demographics", flags.demographics,
                                      "zipcode demographics CSV");
  auto* boundaries = app.add_option("--boundaries", flags.boundaries,
                                    "zipcode boundary GeoJSON");
  auto* keyword = app.add_option("--keyword", flags.keyword,
                                 "restrict `all` to one keyword");
  auto* theta = app.add_option("--theta", flags.theta, "top zipcodes per domain (20)");
  auto* resolution = app.add_option("--resolution", flags.resolution,
                                    "modularity resolution (1.0)");
  auto* seed = app.add_option("--seed", flags.seed, "community detection seed (42)");
  auto* out_dir = app.add_option("--out", flags.out, "output directory (out)");
  auto* strict = app.add_flag("--strict,!--no-strict", flags.strict,
                              "fail on zipcodes without demographics");
  auto* rank_by = app.add_option("--rank-by", flags.rank_by,
                                 "zipcode ranking field (visibility)")
                      ->check(CLI::IsMember({"visibility", "traffic"}));
  auto* normalize = app.add_flag("--normalize-traffic,!--no-normalize-traffic",
                                 flags.normalize,
                                 "L1-normalize traffic per zipcode");
  auto* jobs = app.add_option("--jobs", flags.jobs, "worker threads (1)");
  auto* bins = app.add_option("--bins", flags.bins, "histogram bins (20)");
  auto* top_n = app.add_option("--top", flags.top_n, "domains per category (10)");
  auto* max_iterations = app.add_option("--max-iterations", flags.max_iterations,
                                        "Leiden outer iterations (100)");

  app.require_subcommand(1);
  auto* validate_cmd = app.add_subcommand("validate", "check the input tables");
  auto* graph_cmd = app.add_subcommand("graph", "edge list and weight histogram");
  auto* communities_cmd =
      app.add_subcommand("communities", "Leiden partition and cluster demographics");
  auto* profiles_cmd = app.add_subcommand("profiles", "per-domain target profiles");
  auto* map_cmd = app.add_subcommand("map", "choropleth of domain target zipcodes");
  auto* all_cmd = app.add_subcommand("all", "every output for every keyword");
  CLI::Option* domains = nullptr;
  for (auto* sub : {graph_cmd, communities_cmd, profiles_cmd, map_cmd}) {
    sub->add_option("keyword", flags.positional_keyword, "keyword to analyse");
  }
  domains = map_cmd->add_option("--domains", flags.domains, "comma-separated domains")
                ->delimiter(',');
  for (auto* sub : {validate_cmd, graph_cmd, communities_cmd, profiles_cmd,
                    map_cmd, all_cmd}) {
    sub->fallthrough();
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();  // program name
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  RunConfig config;
  try {
    std::string config_path = flags.config;
    if (config_path.empty()) {
      if (const char* env = std::getenv(kConfigEnvVar)) config_path = env;
    }
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) {
        err << "error: cannot open config file " << config_path << '\n';
        return kFailure;
      }
      ApplyConfigText(in, fs::path(config_path).parent_path(), config);
    }
    if (ads->count()) config.ads_path = flags.ads;
    if (demographics->count()) config.demographics_path = flags.demographics;
    if (boundaries->count()) config.boundaries_path = flags.boundaries;
    if (keyword->count()) config.keyword = flags.keyword;
    if (theta->count()) config.theta = flags.theta;
    if (resolution->count()) config.resolution = flags.resolution;
    if (seed->count()) config.seed = flags.seed;
    if (out_dir->count()) config.out_dir = flags.out;
    if (strict->count()) config.strict = flags.strict;
    if (rank_by->count()) config.rank_by = ParseRankBy(flags.rank_by);
    if (normalize->count()) config.normalize_traffic = flags.normalize;
    if (jobs->count()) config.jobs = flags.jobs;
    if (bins->count()) config.bins = flags.bins;
    if (top_n->count()) config.top_n = flags.top_n;
    if (max_iterations->count()) config.max_iterations = flags.max_iterations;
    if (domains->count()) config.domains = flags.domains;
    CheckConfig(config);
    if (*map_cmd && !config.boundaries_path) {
      throw UsageError("map requires --boundaries");
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  std::string target_keyword = flags.positional_keyword;
  const bool needs_keyword =
      *graph_cmd || *communities_cmd || *profiles_cmd || *map_cmd;
  if (needs_keyword && target_keyword.empty()) {
    if (!config.keyword) {
      err << "error: a keyword is required\n";
      return kUsage;
    }
    target_keyword = *config.keyword;
  }

  try {
    std::vector<AdRecord> records;
    std::vector<ZipDemographics> rows;
    {
      auto in = OpenInput(config.ads_path);
      try {
        records = ParseAdRecords(in);
      } catch (const ParseError& e) {
        throw AuditError(config.ads_path.string() + ": " + e.what());
      }
    }
    {
      auto in = OpenInput(config.demographics_path);
      try {
        rows = ParseDemographics(in);
      } catch (const ParseError& e) {
        throw AuditError(config.demographics_path.string() + ": " + e.what());
      }
    }

    fs::create_directories(config.out_dir);
    const auto mode =
        config.strict ? ValidationMode::kStrict : ValidationMode::kPermissive;
    std::optional<ValidatedDataset> validated;
    try {
      validated = ValidateDataset(std::move(records), std::move(rows), mode);
    } catch (const ValidationError& e) {
      ValidationReport report;
      report.missing_demographics = e.uncovered_zipcodes();
      WriteFile(config.out_dir / "validation_report.txt", FormatReport(report));
      err << "error: " << e.what() << '\n';
      return kFailure;
    }
    const auto& report = validated->report;
    if (report.dropped_records > 0) {
      err << "warning: dropped " << report.dropped_records
          << " records for zipcodes without demographics\n";
    }

    Session session{config, std::move(validated->dataset), {}, {}, {}};
    for (auto& [kw, dir] : KeywordDirectories(session.dataset.keywords())) {
      session.directories.emplace(kw, dir);
    }

    if (*validate_cmd || *all_cmd) {
      WriteFile(config.out_dir / "validation_report.txt", FormatReport(report));
    }
    if (*validate_cmd) {
      out << session.dataset.records().size() << " records, "
          << session.dataset.keywords().size() << " keywords, "
          << session.dataset.zipcodes().size() << " zipcodes\n"
          << FormatReport(report);
      return kOk;
    }

    session.baseline = RegionBaseline(session.dataset.demographics());
    if (config.boundaries_path) {
      auto in = OpenInput(*config.boundaries_path);
      session.boundaries = ReadBoundaries(in);
    }

    if (*all_cmd) {
      bool failed = false;
      RunAll(session, out, err, failed);
      return failed ? kFailure : kOk;
    }

    RequireKeyword(session, target_keyword);
    KeywordLog log;
    if (*graph_cmd) RunGraph(session, target_keyword, config.jobs);
    if (*communities_cmd) RunCommunities(session, target_keyword, config.jobs);
    if (*profiles_cmd) RunProfiles(session, target_keyword, log);
    if (*map_cmd) RunMap(session, target_keyword);
    for (const auto& warning : log.warnings) err << "warning: " << warning << '\n';
    out << target_keyword << " -> " << session.directories.at(target_keyword)
        << '\n';
    return kOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace geoad::cli
