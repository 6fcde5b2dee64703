#include "rank_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rmqcal/error.hpp"

namespace rmqcal::cli {

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool parse_int(const std::string& s, long long& out) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return in;
}

}  // namespace

RankTable read_rank_table(std::istream& in) {
  RankTable table;
  std::vector<std::vector<long long>> columns;
  std::string line;
  std::size_t row = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++row;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto cells = split_csv(line);
    if (cells.size() < 2) throw ParseError("expected a sample id and at least one rank", row);
    if (width == 0) {
      width = cells.size();
      columns.assign(width - 1, {});
      long long probe = 0;
      if (!parse_int(cells[1], probe)) {
        table.list_names.assign(cells.begin() + 1, cells.end());
        continue;
      }
    }
    if (cells.size() != width) {
      throw ParseError("expected " + std::to_string(width) + " columns, found " + std::to_string(cells.size()), row);
    }
    table.sample_ids.push_back(cells[0]);
    for (std::size_t k = 1; k < width; ++k) {
      long long v = 0;
      if (!parse_int(cells[k], v)) throw ParseError("rank '" + cells[k] + "' is not an integer", row);
      if (v < 1) throw ParseError("ranks must be >= 1", row);
      columns[k - 1].push_back(v);
    }
  }
  if (table.sample_ids.empty()) throw ParseError("no rank rows", row);
  if (table.list_names.empty()) {
    for (std::size_t k = 0; k < columns.size(); ++k) table.list_names.push_back("L" + std::to_string(k + 1));
  }
  for (const auto& col : columns) {
    std::vector<double> values(col.begin(), col.end());
    RankList list = competition_ranks(values);
    for (std::size_t i = 0; i < col.size(); ++i) {
      if (list.ranks[i] != col[i]) table.recoded = true;
    }
    table.lists.push_back(std::move(list));
  }
  return table;
}

RankTable read_rank_table(const std::filesystem::path& path) {
  auto in = open(path);
  return read_rank_table(in);
}

std::vector<double> read_weights(std::istream& in) {
  std::vector<double> out;
  std::string token;
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  for (char& c : text) {
    if (c == ',') c = ' ';
  }
  std::stringstream ss(text);
  while (ss >> token) {
    double v = 0.0;
    const char* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v) || v < 0.0) {
      throw ParseError("weight '" + token + "' is not a non-negative number");
    }
    out.push_back(v);
  }
  if (out.empty()) throw ParseError("weights file is empty");
  return out;
}

std::vector<double> read_weights(const std::filesystem::path& path) {
  auto in = open(path);
  return read_weights(in);
}

}  // namespace rmqcal::cli
