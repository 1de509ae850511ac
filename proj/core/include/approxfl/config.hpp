#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace approxfl {

// Plain-text key = value configuration. Keys may be written dotted
// (channel.snr_db = 10) or grouped under [section] headers; '#' and ';'
// start comments.
class Config {
  public:
    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text);

    bool has(const std::string& key) const;
    std::string get(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    uint64_t get_u64(const std::string& key, uint64_t fallback) const;
    std::vector<int> get_int_list(const std::string& key, std::vector<int> fallback) const;

    // Every key must have been consumed by one of the getters above;
    // leftovers are almost always typos and abort the run.
    void check_all_consumed() const;

    const std::map<std::string, std::string>& values() const { return values_; }

  private:
    std::map<std::string, std::string> values_;
    mutable std::set<std::string> consumed_;
};

}  // namespace approxfl
