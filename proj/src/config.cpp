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

#include "overbeam/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace overbeam
{

namespace
{

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

bool valid_key(std::string_view key)
{
    if (key.empty() || !std::islower(static_cast<unsigned char>(key.front())))
        return false;
    return std::all_of(key.begin(), key.end(), [](char c) {
        return std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) || c == '_';
    });
}

} // namespace

ConfigFile ConfigFile::parse(std::string_view text, const std::string &source)
{
    ConfigFile cfg;
    cfg.source_ = source;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size())
    {
        const std::size_t eol = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        const std::string where = source + ":" + std::to_string(line_no) + ": ";
        if (eq == std::string_view::npos)
            throw ConfigError(where + "expected 'key = value'.");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (!valid_key(key))
            throw ConfigError(where + "invalid key '" + key + "'.");
        if (value.empty())
            throw ConfigError(where + "empty value for '" + key + "'.");
        if (!cfg.values_.emplace(key, value).second)
            throw ConfigError(where + "duplicate key '" + key + "'.");
    }
    return cfg;
}

ConfigFile ConfigFile::load(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("Cannot read config file '" + path + "'.");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
}

void ConfigFile::require_known(std::initializer_list<std::string_view> known) const
{
    for (const auto &[key, value] : values_)
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ConfigError(source_ + ": unknown key '" + key + "'.");
}

std::string ConfigFile::get_string(const std::string &key) const
{
    const auto it = values_.find(key);
    if (it == values_.end())
        throw ConfigError(source_ + ": missing required key '" + key + "'.");
    return it->second;
}

std::string ConfigFile::get_string(const std::string &key, const std::string &fallback) const
{
    return has(key) ? get_string(key) : fallback;
}

namespace
{

template <typename T>
T parse_number(const std::string &source, const std::string &key, const std::string &text)
{
    T v{};
    const char *end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end)
        throw ConfigError(source + ": key '" + key + "' has invalid numeric value '" + text + "'.");
    return v;
}

} // namespace

std::size_t ConfigFile::get_size(const std::string &key) const
{
    return parse_number<std::size_t>(source_, key, get_string(key));
}

std::size_t ConfigFile::get_size(const std::string &key, std::size_t fallback) const
{
    return has(key) ? get_size(key) : fallback;
}

std::uint64_t ConfigFile::get_u64(const std::string &key, std::uint64_t fallback) const
{
    return has(key) ? parse_number<std::uint64_t>(source_, key, get_string(key)) : fallback;
}

double ConfigFile::get_double(const std::string &key) const
{
    return parse_number<double>(source_, key, get_string(key));
}

double ConfigFile::get_double(const std::string &key, double fallback) const
{
    return has(key) ? get_double(key) : fallback;
}

bool ConfigFile::get_bool(const std::string &key, bool fallback) const
{
    if (!has(key))
        return fallback;
    const std::string v = get_string(key);
    if (v == "true" || v == "1" || v == "yes")
        return true;
    if (v == "false" || v == "0" || v == "no")
        return false;
    throw ConfigError(source_ + ": key '" + key + "' expects a boolean, got '" + v + "'.");
}

std::vector<std::string> ConfigFile::get_list(const std::string &key) const
{
    const std::string text = get_string(key);
    std::vector<std::string> items;
    std::size_t pos = 0;
    while (pos <= text.size())
    {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        const std::string item(trim(std::string_view(text).substr(pos, comma - pos)));
        if (item.empty())
            throw ConfigError(source_ + ": key '" + key + "' has an empty list item.");
        items.push_back(item);
        pos = comma + 1;
    }
    return items;
}

std::vector<std::string> ConfigFile::get_list(const std::string &key, std::vector<std::string> fallback) const
{
    return has(key) ? get_list(key) : fallback;
}

} // namespace overbeam
