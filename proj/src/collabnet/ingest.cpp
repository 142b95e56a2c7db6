// Copyright 2026 The collabnet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "collabnet/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

namespace collabnet::ingest {

namespace {

constexpr std::array<std::string_view, kActionCount> kActionNames = {
    "commit",
    "pull_request_open",
    "pull_request_merged",
    "pull_request_review_APPROVED",
    "pull_request_review_COMMENTED",
    "pull_request_review_DISMISSED",
    "issue_opened",
    "issue_comment",
};

constexpr std::array<std::string_view, 3> kStageNames = {"sandbox", "incubating", "graduated"};

// Howard Hinnant's civil-from-days / days-from-civil.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp < 10 ? mp + 3 : mp - 9;
  y += (m <= 2);
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

bool read_digits(std::string_view s, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > s.size()) return false;
  int v = 0;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    v = v * 10 + (s[i] - '0');
  }
  out = v;
  return true;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(trim(cur));
  return fields;
}

std::string csv_escape(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

constexpr std::array<std::string_view, 6> kColumns = {"contributor", "repo", "action", "count", "timestamp", "stage"};

struct RawFields {
  std::string contributor, repo, action, count, timestamp, stage;
};

// Validates one row; returns an error message or empty.
std::string build_record(const RawFields& f, const ParseOptions& options, EventRecord& out) {
  if (f.contributor.empty()) return "empty contributor";
  if (f.repo.empty()) return "empty repo";
  auto action = parse_action(f.action);
  if (!action) return "schema error: unknown action '" + f.action + "'";
  std::uint64_t count = 0;
  auto [ptr, ec] = std::from_chars(f.count.data(), f.count.data() + f.count.size(), count);
  if (ec != std::errc() || ptr != f.count.data() + f.count.size()) return "unparsable count '" + f.count + "'";
  if (count < 1) return "count must be >= 1";
  auto ts = parse_rfc3339(f.timestamp);
  if (!ts) return "unparsable timestamp '" + f.timestamp + "'";
  if (options.range_begin && *ts < *options.range_begin) return "timestamp before study range";
  if (options.range_end && *ts >= *options.range_end) return "timestamp after study range";
  auto stage = parse_stage(f.stage);
  if (!stage) return "schema error: unknown stage '" + f.stage + "'";
  out = EventRecord{f.contributor, f.repo, *action, count, *ts, *stage};
  return {};
}

void enforce_cap(const ParseResult& result, const ParseOptions& options) {
  if (result.rows > 0 && result.error_ratio() > options.malformed_cap) {
    std::ostringstream msg;
    msg << result.errors.size() << " of " << result.rows << " rows malformed (cap "
        << options.malformed_cap << ")";
    if (!result.errors.empty()) msg << "; first: line " << result.errors.front().line << ": " << result.errors.front().message;
    fail(ErrorCode::kParse, msg.str());
  }
}

ParseResult parse_csv(std::string_view text, const ParseOptions& options) {
  ParseResult result;
  std::size_t line_no = 0;
  std::array<int, 6> column_of{};
  bool header_seen = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line);
    if (!header_seen) {
      column_of.fill(-1);
      for (std::size_t i = 0; i < fields.size(); ++i) {
        for (std::size_t c = 0; c < kColumns.size(); ++c) {
          if (fields[i] == kColumns[c]) column_of[c] = static_cast<int>(i);
        }
      }
      for (std::size_t c = 0; c < kColumns.size(); ++c) {
        if (column_of[c] < 0) fail(ErrorCode::kSchema, "CSV header is missing column '" + std::string(kColumns[c]) + "'");
      }
      header_seen = true;
      continue;
    }
    ++result.rows;
    int max_col = *std::max_element(column_of.begin(), column_of.end());
    if (static_cast<int>(fields.size()) <= max_col) {
      result.errors.push_back({line_no, "expected 6 fields, got " + std::to_string(fields.size())});
      continue;
    }
    RawFields f{fields[column_of[0]], fields[column_of[1]], fields[column_of[2]],
                fields[column_of[3]], fields[column_of[4]], fields[column_of[5]]};
    EventRecord rec;
    std::string err = build_record(f, options, rec);
    if (err.empty()) result.records.push_back(std::move(rec));
    else result.errors.push_back({line_no, std::move(err)});
  }
  if (!header_seen) fail(ErrorCode::kSchema, "CSV input has no header");
  return result;
}

ParseResult parse_jsonl(std::string_view text, const ParseOptions& options) {
  ParseResult result;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (trim(line).empty()) continue;
    ++result.rows;
    nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
      result.errors.push_back({line_no, "invalid JSON object"});
      continue;
    }
    RawFields f;
    std::string* slots[] = {&f.contributor, &f.repo, &f.action, &f.count, &f.timestamp, &f.stage};
    std::string missing;
    for (std::size_t c = 0; c < kColumns.size(); ++c) {
      auto it = obj.find(std::string(kColumns[c]));
      if (it == obj.end()) {
        missing = std::string(kColumns[c]);
        break;
      }
      if (it->is_string()) *slots[c] = it->get<std::string>();
      else if (it->is_number_unsigned()) *slots[c] = std::to_string(it->get<std::uint64_t>());
      else *slots[c] = it->dump();
    }
    if (!missing.empty()) {
      result.errors.push_back({line_no, "schema error: missing key '" + missing + "'"});
      continue;
    }
    EventRecord rec;
    std::string err = build_record(f, options, rec);
    if (err.empty()) result.records.push_back(std::move(rec));
    else result.errors.push_back({line_no, std::move(err)});
  }
  return result;
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  // The smaller index always becomes the root, so roots are order-independent.
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

std::map<std::string, std::uint64_t> contributor_totals(const std::vector<EventRecord>& records) {
  std::map<std::string, std::uint64_t> totals;
  for (const auto& r : records) totals[r.contributor] += r.count;
  return totals;
}

}  // namespace

std::string_view action_name(Action action) { return kActionNames[static_cast<std::size_t>(action)]; }

std::optional<Action> parse_action(std::string_view text) {
  for (std::size_t i = 0; i < kActionNames.size(); ++i) {
    if (kActionNames[i] == text) return static_cast<Action>(i);
  }
  return std::nullopt;
}

std::string_view stage_name(ProjectStage stage) { return kStageNames[static_cast<std::size_t>(stage)]; }

std::optional<ProjectStage> parse_stage(std::string_view text) {
  for (std::size_t i = 0; i < kStageNames.size(); ++i) {
    if (kStageNames[i] == text) return static_cast<ProjectStage>(i);
  }
  return std::nullopt;
}

std::optional<Format> parse_format(std::string_view text) {
  if (text == "csv") return Format::kCsv;
  if (text == "jsonl") return Format::kJsonl;
  return std::nullopt;
}

std::optional<Timestamp> parse_rfc3339(std::string_view s) {
  // YYYY-MM-DDTHH:MM:SS[.frac](Z|+HH:MM|-HH:MM)
  int year, month, day, hour, minute, second;
  if (s.size() < 20) return std::nullopt;
  if (!read_digits(s, 0, 4, year) || s[4] != '-' || !read_digits(s, 5, 2, month) || s[7] != '-' ||
      !read_digits(s, 8, 2, day))
    return std::nullopt;
  if (s[10] != 'T' && s[10] != 't' && s[10] != ' ') return std::nullopt;
  if (!read_digits(s, 11, 2, hour) || s[13] != ':' || !read_digits(s, 14, 2, minute) || s[16] != ':' ||
      !read_digits(s, 17, 2, second))
    return std::nullopt;
  if (month < 1 || month > 12 || day < 1 || hour > 23 || minute > 59 || second > 60) return std::nullopt;
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
  int max_day = kDays[month - 1] + (month == 2 && leap ? 1 : 0);
  if (day > max_day) return std::nullopt;
  std::size_t pos = 19;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) return std::nullopt;
  }
  if (pos >= s.size()) return std::nullopt;
  std::int64_t offset = 0;
  if (s[pos] == 'Z' || s[pos] == 'z') {
    ++pos;
  } else if (s[pos] == '+' || s[pos] == '-') {
    int oh, om;
    if (!read_digits(s, pos + 1, 2, oh) || pos + 3 >= s.size() || s[pos + 3] != ':' || !read_digits(s, pos + 4, 2, om))
      return std::nullopt;
    if (oh > 23 || om > 59) return std::nullopt;
    offset = (s[pos] == '+' ? 1 : -1) * (oh * 3600LL + om * 60LL);
    pos += 6;
  } else {
    return std::nullopt;
  }
  if (pos != s.size()) return std::nullopt;
  std::int64_t days = days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day));
  // Leap seconds collapse onto the following second.
  return days * 86400 + hour * 3600LL + minute * 60LL + second - offset;
}

std::string format_rfc3339(Timestamp ts) {
  std::int64_t days = floor_div(ts, 86400);
  std::int64_t rem = ts - days * 86400;
  std::int64_t y;
  unsigned m, d;
  civil_from_days(days, y, m, d);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ", static_cast<long long>(y), m, d,
                static_cast<long long>(rem / 3600), static_cast<long long>((rem / 60) % 60),
                static_cast<long long>(rem % 60));
  return buf;
}

Quarter Quarter::from_timestamp(Timestamp ts) {
  std::int64_t y;
  unsigned m, d;
  civil_from_days(floor_div(ts, 86400), y, m, d);
  return Quarter{static_cast<int>(y), static_cast<int>((m - 1) / 3 + 1)};
}

Quarter Quarter::from_index(std::int64_t index) {
  return Quarter{static_cast<int>(floor_div(index, 4)), static_cast<int>(index - 4 * floor_div(index, 4)) + 1};
}

std::optional<Quarter> Quarter::parse(std::string_view label) {
  auto q = label.find('Q');
  if (q == std::string_view::npos || q + 2 != label.size()) return std::nullopt;
  int year = 0;
  auto [ptr, ec] = std::from_chars(label.data(), label.data() + q, year);
  if (ec != std::errc() || ptr != label.data() + q) return std::nullopt;
  int quarter = label[q + 1] - '0';
  if (quarter < 1 || quarter > 4) return std::nullopt;
  return Quarter{year, quarter};
}

std::string Quarter::label() const { return std::to_string(year) + "Q" + std::to_string(quarter); }

ParseResult parse_events_text(std::string_view text, Format format, const ParseOptions& options) {
  ParseResult result = format == Format::kCsv ? parse_csv(text, options) : parse_jsonl(text, options);
  enforce_cap(result, options);
  return result;
}

ParseResult parse_events(const std::filesystem::path& path, Format format, const ParseOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open event log " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_events_text(buf.str(), format, options);
}

std::string_view evidence_name(MergeEvidence evidence) {
  switch (evidence) {
    case MergeEvidence::kSelf: return "self";
    case MergeEvidence::kEmailExact: return "email_exact";
    case MergeEvidence::kUsernameSimilarity: return "username_similarity";
  }
  return "self";
}

const std::string& IdentityMap::resolve(const std::string& alias) const {
  auto it = canonical.find(alias);
  return it == canonical.end() ? alias : it->second;
}

std::size_t IdentityMap::merged_aliases() const {
  std::size_t n = 0;
  for (const auto& [alias, canon] : canonical) n += alias != canon;
  return n;
}

double username_similarity(std::string_view a, std::string_view b) {
  std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 1.0;
  std::string la = lowercase(a), lb = lowercase(b);
  return 1.0 - static_cast<double>(levenshtein(la, lb)) / static_cast<double>(longest);
}

IdentityResult resolve_identities(std::vector<EventRecord> records,
                                  const std::map<std::string, std::string>& email_index,
                                  double similarity_threshold) {
  require(similarity_threshold > 0.0 && similarity_threshold <= 1.0, ErrorCode::kInvalidArgument,
          "similarity_threshold must be in (0, 1]");
  std::set<std::string> alias_set;
  for (const auto& r : records) alias_set.insert(r.contributor);
  std::vector<std::string> aliases(alias_set.begin(), alias_set.end());  // sorted
  UnionFind uf(aliases.size());
  std::vector<MergeEvidence> evidence(aliases.size(), MergeEvidence::kSelf);

  std::map<std::string, std::size_t> first_with_email;
  for (std::size_t i = 0; i < aliases.size(); ++i) {
    auto it = email_index.find(aliases[i]);
    if (it == email_index.end() || it->second.empty()) continue;
    std::string email = lowercase(it->second);
    auto [slot, inserted] = first_with_email.emplace(email, i);
    if (!inserted) {
      uf.unite(slot->second, i);
      evidence[i] = MergeEvidence::kEmailExact;
      evidence[slot->second] = MergeEvidence::kEmailExact;
    }
  }

  std::vector<std::string> lowered(aliases.size());
  for (std::size_t i = 0; i < aliases.size(); ++i) lowered[i] = lowercase(aliases[i]);
  for (std::size_t i = 0; i < aliases.size(); ++i) {
    for (std::size_t j = i + 1; j < aliases.size(); ++j) {
      const double la = static_cast<double>(lowered[i].size()), lb = static_cast<double>(lowered[j].size());
      // Length difference alone bounds the similarity from above.
      if (std::min(la, lb) / std::max(la, lb) < similarity_threshold) continue;
      if (uf.find(i) == uf.find(j)) continue;
      double longest = std::max(la, lb);
      double sim = 1.0 - static_cast<double>(levenshtein(lowered[i], lowered[j])) / longest;
      if (sim >= similarity_threshold) {
        uf.unite(i, j);
        if (evidence[i] == MergeEvidence::kSelf) evidence[i] = MergeEvidence::kUsernameSimilarity;
        if (evidence[j] == MergeEvidence::kSelf) evidence[j] = MergeEvidence::kUsernameSimilarity;
      }
    }
  }

  IdentityResult out;
  for (std::size_t i = 0; i < aliases.size(); ++i) {
    const std::string& canon = aliases[uf.find(i)];
    out.identities.canonical[aliases[i]] = canon;
    out.identities.evidence[aliases[i]] = evidence[i];
  }
  for (auto& r : records) r.contributor = out.identities.resolve(r.contributor);
  out.records = std::move(records);
  return out;
}

bool glob_match(std::string_view pattern, std::string_view text) {
  std::size_t p = 0, t = 0, star = std::string_view::npos, mark = 0;
  while (t < text.size()) {
    if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == text[t])) {
      ++p;
      ++t;
    } else if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      mark = t;
    } else if (star != std::string_view::npos) {
      p = star + 1;
      t = ++mark;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') ++p;
  return p == pattern.size();
}

BotFilterResult filter_bots(std::vector<EventRecord> records, const BotFilterOptions& options) {
  struct Activity {
    std::uint64_t total = 0;
    std::set<std::int64_t> days;
  };
  std::map<std::string, Activity> activity;
  for (const auto& r : records) {
    auto& a = activity[r.contributor];
    a.total += r.count;
    a.days.insert(floor_div(r.timestamp, 86400));
  }
  std::set<std::string> removed;
  for (const auto& [id, a] : activity) {
    bool bot = std::any_of(options.name_patterns.begin(), options.name_patterns.end(),
                           [&](const std::string& pat) { return glob_match(pat, id); });
    double rate = static_cast<double>(a.total) / static_cast<double>(a.days.size());
    if (bot || rate > options.activity_rate_cap) removed.insert(id);
  }
  BotFilterResult out;
  out.removed.assign(removed.begin(), removed.end());
  for (auto& r : records) {
    if (removed.count(r.contributor)) ++out.removed_records;
    else out.kept.push_back(std::move(r));
  }
  return out;
}

double quantile_linear(const std::vector<double>& sorted, double p) {
  require(!sorted.empty(), ErrorCode::kInvalidArgument, "quantile of empty sample");
  double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  std::size_t lo = static_cast<std::size_t>(std::floor(h));
  std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

OutlierResult remove_outliers_iqr(std::vector<EventRecord> records, double k) {
  require(k > 0.0, ErrorCode::kInvalidArgument, "IQR multiplier must be > 0");
  OutlierResult out;
  auto totals = contributor_totals(records);
  if (totals.size() < 4) {
    out.kept = std::move(records);
    return out;
  }
  std::vector<double> values;
  values.reserve(totals.size());
  for (const auto& [id, t] : totals) values.push_back(static_cast<double>(t));
  std::sort(values.begin(), values.end());
  double q1 = quantile_linear(values, 0.25), q3 = quantile_linear(values, 0.75);
  double iqr = q3 - q1;
  out.applied = true;
  out.lower = q1 - k * iqr;
  out.upper = q3 + k * iqr;
  std::set<std::string> flagged;
  for (const auto& [id, t] : totals) {
    double v = static_cast<double>(t);
    if (v < out.lower || v > out.upper) flagged.insert(id);
  }
  out.flagged.assign(flagged.begin(), flagged.end());
  for (auto& r : records) {
    if (flagged.count(r.contributor)) ++out.removed_records;
    else out.kept.push_back(std::move(r));
  }
  return out;
}

std::optional<std::size_t> CleanDataset::window_index(const Quarter& q) const {
  if (windows.empty()) return std::nullopt;
  std::int64_t off = q.index() - windows.front().index();
  if (off < 0 || off >= static_cast<std::int64_t>(windows.size())) return std::nullopt;
  return static_cast<std::size_t>(off);
}

std::vector<std::string> CleanDataset::contributors() const {
  std::set<std::string> ids;
  for (const auto& r : records) ids.insert(r.contributor);
  return {ids.begin(), ids.end()};
}

CleanDataset align_quarters(std::vector<EventRecord> records) {
  require(!records.empty(), ErrorCode::kInvalidArgument, "align_quarters requires at least one record");
  // Canonical record order makes every downstream output independent of input order.
  std::stable_sort(records.begin(), records.end(), [](const EventRecord& a, const EventRecord& b) {
    return std::tie(a.timestamp, a.contributor, a.repo, a.action, a.count, a.stage) <
           std::tie(b.timestamp, b.contributor, b.repo, b.action, b.count, b.stage);
  });
  CleanDataset ds;
  std::int64_t lo = Quarter::from_timestamp(records.front().timestamp).index();
  std::int64_t hi = Quarter::from_timestamp(records.back().timestamp).index();
  for (std::int64_t i = lo; i <= hi; ++i) ds.windows.push_back(Quarter::from_index(i));
  ds.record_window.reserve(records.size());
  for (const auto& r : records) {
    ds.record_window.push_back(static_cast<std::uint32_t>(Quarter::from_timestamp(r.timestamp).index() - lo));
  }
  ds.records = std::move(records);
  ds.provenance.kept_records = ds.records.size();
  ds.provenance.input_rows = ds.records.size();
  return ds;
}

CleanDataset prepare_dataset(const ParseResult& parsed, const PrepareOptions& options) {
  auto identities = resolve_identities(parsed.records, options.email_index, options.similarity_threshold);
  std::size_t merged = identities.identities.merged_aliases();
  auto bots = filter_bots(std::move(identities.records), options.bots);
  auto outliers = remove_outliers_iqr(std::move(bots.kept), options.iqr_k);
  require(!outliers.kept.empty(), ErrorCode::kInvalidArgument, "no records survive preprocessing");
  CleanDataset ds = align_quarters(std::move(outliers.kept));
  ds.provenance.input_rows = parsed.rows;
  ds.provenance.malformed_rows = parsed.errors.size();
  ds.provenance.merged_aliases = merged;
  ds.provenance.bot_contributors = bots.removed.size();
  ds.provenance.bot_records = bots.removed_records;
  ds.provenance.outlier_contributors = outliers.flagged.size();
  ds.provenance.outlier_records = outliers.removed_records;
  ds.provenance.kept_records = ds.records.size();
  ds.retention_ratio = parsed.rows == 0 ? 1.0 : static_cast<double>(ds.records.size()) / parsed.rows;
  return ds;
}

std::map<std::string, std::string> read_email_index(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open email index " + path.string());
  std::map<std::string, std::string> index;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line);
    if (header) {
      header = false;
      if (fields.size() >= 2 && fields[0] == "alias") continue;
    }
    if (fields.size() < 2) fail(ErrorCode::kParse, "email index row needs alias,email: " + line);
    index[fields[0]] = fields[1];
  }
  return index;
}

void write_clean_jsonl(const CleanDataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  for (std::size_t i = 0; i < dataset.records.size(); ++i) {
    const auto& r = dataset.records[i];
    nlohmann::ordered_json j;
    j["contributor"] = r.contributor;
    j["repo"] = r.repo;
    j["action"] = action_name(r.action);
    j["count"] = r.count;
    j["timestamp"] = format_rfc3339(r.timestamp);
    j["stage"] = stage_name(r.stage);
    j["window"] = dataset.windows[dataset.record_window[i]].label();
    out << j.dump() << '\n';
  }
}

void write_provenance_json(const CleanDataset& dataset, const std::filesystem::path& path) {
  const auto& p = dataset.provenance;
  nlohmann::ordered_json j;
  j["input_rows"] = p.input_rows;
  j["malformed_rows"] = p.malformed_rows;
  j["identity_merged_aliases"] = p.merged_aliases;
  j["bot_contributors_removed"] = p.bot_contributors;
  j["bot_records_removed"] = p.bot_records;
  j["outlier_contributors_removed"] = p.outlier_contributors;
  j["outlier_records_removed"] = p.outlier_records;
  j["kept_records"] = p.kept_records;
  j["retention_ratio"] = dataset.retention_ratio;
  nlohmann::ordered_json windows = nlohmann::ordered_json::array();
  for (const auto& w : dataset.windows) windows.push_back(w.label());
  j["windows"] = windows;
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

CleanDataset read_clean_jsonl(const std::filesystem::path& path) {
  ParseOptions strict;
  strict.malformed_cap = 0.0;
  ParseResult parsed = parse_events(path, Format::kJsonl, strict);
  CleanDataset ds = align_quarters(std::move(parsed.records));
  auto prov_path = path.parent_path() / "provenance.json";
  std::ifstream in(prov_path);
  if (in) {
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (!j.is_discarded()) {
      auto& p = ds.provenance;
      p.input_rows = j.value("input_rows", p.input_rows);
      p.malformed_rows = j.value("malformed_rows", std::size_t{0});
      p.merged_aliases = j.value("identity_merged_aliases", std::size_t{0});
      p.bot_contributors = j.value("bot_contributors_removed", std::size_t{0});
      p.bot_records = j.value("bot_records_removed", std::size_t{0});
      p.outlier_contributors = j.value("outlier_contributors_removed", std::size_t{0});
      p.outlier_records = j.value("outlier_records_removed", std::size_t{0});
      ds.retention_ratio = j.value("retention_ratio", 1.0);
    }
  }
  return ds;
}

void write_events_csv(const std::vector<EventRecord>& records, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  out << "contributor,repo,action,count,timestamp,stage\n";
  for (const auto& r : records) {
    out << csv_escape(r.contributor) << ',' << csv_escape(r.repo) << ',' << action_name(r.action) << ','
        << r.count << ',' << format_rfc3339(r.timestamp) << ',' << stage_name(r.stage) << '\n';
  }
}

}  // namespace collabnet::ingest
