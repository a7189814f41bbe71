#include "tailorsql/eval/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

namespace tailorsql::eval {

using nlohmann::json;

namespace {

constexpr const char* kEntityWords[] = {
    "customer", "invoice",  "product",  "supplier", "warehouse", "employee", "department", "shipment",
    "payment",  "account",  "region",   "category", "vendor",    "contract", "project",    "ticket",
    "course",   "student",  "teacher",  "patient",  "doctor",    "flight",   "airport",    "hotel",
    "booking",  "museum",   "artist",   "album",    "library",   "member",   "vehicle",    "driver",
    "garden",   "recipe",   "planet",   "satellite"};

constexpr const char* kFiller[] = {"show", "list", "find", "give", "me", "all", "the", "every", "please"};

std::string cryptic_name(std::mt19937_64& rng, const std::set<std::string>& taken) {
  static const std::string consonants = "bdfgklmnprstvxz";
  static const std::string vowels = "aeiou";
  for (;;) {
    std::string s;
    for (int i = 0; i < 3; ++i) {
      s += consonants[rng() % consonants.size()];
      s += vowels[rng() % vowels.size()];
    }
    s += 'x';
    if (taken.count(s) == 0) return s;
  }
}

std::string cased(const std::string& keyword, std::mt19937_64& rng) {
  if (rng() % 2 == 0) return keyword;
  std::string s = keyword;
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

struct Link {
  std::string name;
  std::size_t a = 0;
  std::size_t b = 0;
};

class Generator {
 public:
  explicit Generator(const CorpusConfig& c) : config_(c), rng_(c.seed) {
    if (c.entity_tables < 2 || c.entity_tables > std::size(kEntityWords)) {
      throw std::invalid_argument("entity_tables must lie in [2, " + std::to_string(std::size(kEntityWords)) + "]");
    }
    for (std::size_t i = 0; i < c.entity_tables; ++i) entities_.emplace_back(kEntityWords[i]);
    std::set<std::string> taken(entities_.begin(), entities_.end());
    std::set<std::pair<std::size_t, std::size_t>> used;
    const std::size_t max_links = c.entity_tables * (c.entity_tables - 1) / 2;
    if (c.link_tables > max_links) throw std::invalid_argument("too many link tables for the entity count");
    while (links_.size() < c.link_tables) {
      auto a = static_cast<std::size_t>(rng_() % c.entity_tables);
      auto b = static_cast<std::size_t>(rng_() % c.entity_tables);
      if (a == b || used.count({std::min(a, b), std::max(a, b)}) != 0) continue;
      used.insert({std::min(a, b), std::max(a, b)});
      auto name = cryptic_name(rng_, taken);
      taken.insert(name);
      links_.push_back({name, a, b});
    }
    double total = 0.0;
    for (std::size_t k = 0; k < links_.size(); ++k) {
      total += 1.0 / std::pow(static_cast<double>(k + 1), c.zipf_exponent);
      zipf_cdf_.push_back(total);
    }
    for (auto& x : zipf_cdf_) x /= total;
  }

  Corpus run() {
    Corpus out;
    out.entity_names = entities_;
    for (const auto& l : links_) out.link_names.push_back(l.name);
    out.schema_sql = schema();
    out.stats = stats();
    for (std::size_t i = 0; i < config_.log_queries; ++i) out.log.push_back(pair("log" + std::to_string(i + 1)));
    for (std::size_t i = 0; i < config_.test_pairs; ++i) out.test.push_back(pair("test" + std::to_string(i + 1)));
    for (std::size_t i = 0; i < config_.malformed; ++i) {
      out.malformed.push_back("SELECT " + entities_[i % entities_.size()] + "_name FROM " +
                              entities_[i % entities_.size()] + " WHERE " + entities_[i % entities_.size()] +
                              "_status = 'broken");
    }
    return out;
  }

 private:
  std::string schema() const {
    std::string s;
    for (const auto& e : entities_) {
      s += "CREATE TABLE " + e + " (\n  " + e + "_id INTEGER PRIMARY KEY,\n  " + e + "_name TEXT NOT NULL,\n  " + e +
           "_rating INTEGER,\n  " + e + "_status TEXT\n);\n";
    }
    for (const auto& l : links_) {
      // No REFERENCES clauses: a link table's text says nothing about what it joins.
      s += "CREATE TABLE " + l.name + " (\n  " + l.name + "_src INTEGER,\n  " + l.name + "_dst INTEGER,\n  " +
           l.name + "_wt INTEGER\n);\n";
    }
    return s;
  }

  json stats() {
    json j = json::object();
    for (const auto& e : entities_) {
      j[e][e + "_status"] = json::array({json::array({"active", 50 + rng_() % 100}),
                                         json::array({"closed", 10 + rng_() % 40}),
                                         json::array({"pending", rng_() % 20})});
    }
    return j;
  }

  std::size_t pick_link() {
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng_);
    return static_cast<std::size_t>(std::lower_bound(zipf_cdf_.begin(), zipf_cdf_.end(), u) - zipf_cdf_.begin()) %
           links_.size();
  }

  std::string filler() { return kFiller[rng_() % std::size(kFiller)]; }

  QuestionSqlPair pair(std::string id) {
    static const char* kAliases[] = {"a", "b", "c", "x", "y", "z", "t1", "t2", "t3"};
    const int threshold = 1 + static_cast<int>(rng_() % 9);
    const bool join = !links_.empty() && std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < config_.join_share;
    if (!join) {
      const auto& e = entities_[rng_() % entities_.size()];
      const bool by_status = rng_() % 2 == 0;
      std::string sql = cased("SELECT", rng_) + " " + e + "_name " + cased("FROM", rng_) + " " + e + " " +
                        cased("WHERE", rng_) + " ";
      sql += by_status ? e + "_status = 'active'" : e + "_rating > " + std::to_string(threshold);
      std::string q = filler() + " the " + e + " names " +
                      (by_status ? "that are active" : "with a high rating");
      return {std::move(id), std::move(q), std::move(sql)};
    }
    const auto& l = links_[pick_link()];
    const auto& a = entities_[l.a];
    const auto& b = entities_[l.b];
    // Distinct aliases per statement; a random choice plants textually
    // different copies of the same join path.
    std::vector<std::string> pool(std::begin(kAliases), std::end(kAliases));
    std::shuffle(pool.begin(), pool.end(), rng_);
    const auto& aa = pool[0];
    const auto& la = pool[1];
    const auto& ba = pool[2];
    const int shape = static_cast<int>(rng_() % 3);
    const std::string from = cased("FROM", rng_) + " " + a + " " + aa + " " + cased("JOIN", rng_) + " " + l.name +
                             " " + la + " " + cased("ON", rng_) + " " + aa + "." + a + "_id = " + la + "." + l.name +
                             "_src " + cased("JOIN", rng_) + " " + b + " " + ba + " " + cased("ON", rng_) + " " + la +
                             "." + l.name + "_dst = " + ba + "." + b + "_id";
    std::string sql;
    std::string q;
    if (shape == 0) {
      sql = cased("SELECT", rng_) + " " + aa + "." + a + "_name, " + ba + "." + b + "_name " + from + " " +
            cased("WHERE", rng_) + " " + aa + "." + a + "_rating > " + std::to_string(threshold);
      q = filler() + " the " + a + " names and their " + b + " names for a highly rated " + a;
    } else if (shape == 1) {
      sql = cased("SELECT", rng_) + " " + aa + "." + a + "_name, " + ba + "." + b + "_name " + from + " " +
            cased("WHERE", rng_) + " " + ba + "." + b + "_status = 'active'";
      q = filler() + " each " + a + " together with its active " + b;
    } else {
      sql = cased("SELECT", rng_) + " " + aa + "." + a + "_name, COUNT(*) " + from + " " + cased("GROUP BY", rng_) +
            " " + aa + "." + a + "_name";
      q = "how many " + b + " entries does each " + a + " have";
    }
    return {std::move(id), std::move(q), std::move(sql)};
  }

  CorpusConfig config_;
  std::mt19937_64 rng_;
  std::vector<std::string> entities_;
  std::vector<Link> links_;
  std::vector<double> zipf_cdf_;
};

}  // namespace

std::string Corpus::log_text() const {
  std::string out;
  const std::size_t every = malformed.empty() ? 0 : std::max<std::size_t>(1, log.size() / (malformed.size() + 1));
  std::size_t next_bad = 0;
  for (std::size_t i = 0; i < log.size(); ++i) {
    out += log[i].sql + "\n";
    if (every != 0 && next_bad < malformed.size() && (i + 1) % every == 0) out += malformed[next_bad++] + "\n";
  }
  while (next_bad < malformed.size()) out += malformed[next_bad++] + "\n";
  return out;
}

Corpus generate_corpus(const CorpusConfig& config) { return Generator(config).run(); }

}  // namespace tailorsql::eval
