// SPDX-License-Identifier: Apache-2.0
//
// overbeam: overlapped beam-pattern channel estimation for single-path mmWave MIMO
// Copyright (C) 2026 The overbeam authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef OVERBEAM_CONFIG_HPP
#define OVERBEAM_CONFIG_HPP

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace overbeam
{

class ConfigError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Flat "key = value" text. '#' starts a comment, blank lines are ignored, keys are lower-case
// identifiers and may appear once. Lists are comma separated.
class ConfigFile
{
public:
    static ConfigFile parse(std::string_view text, const std::string &source = "<string>");
    static ConfigFile load(const std::string &path);

    const std::string &source() const { return source_; }
    bool has(const std::string &key) const { return values_.count(key) != 0; }
    const std::map<std::string, std::string> &entries() const { return values_; }

    // Throws ConfigError naming the first key not in `known`.
    void require_known(std::initializer_list<std::string_view> known) const;

    std::string get_string(const std::string &key) const;
    std::string get_string(const std::string &key, const std::string &fallback) const;
    std::size_t get_size(const std::string &key) const;
    std::size_t get_size(const std::string &key, std::size_t fallback) const;
    std::uint64_t get_u64(const std::string &key, std::uint64_t fallback) const;
    double get_double(const std::string &key) const;
    double get_double(const std::string &key, double fallback) const;
    bool get_bool(const std::string &key, bool fallback) const;
    std::vector<std::string> get_list(const std::string &key) const;
    std::vector<std::string> get_list(const std::string &key, std::vector<std::string> fallback) const;

    void set(const std::string &key, const std::string &value) { values_[key] = value; }

private:
    std::string source_;
    std::map<std::string, std::string> values_;
};

} // namespace overbeam

#endif
