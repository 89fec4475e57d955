#include "mpdesign/cli/campaign_data.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace mpdesign::cli {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        auto comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

[[noreturn]] void fail(std::size_t line_no, const std::string& message) {
    throw DataError("campaign data line " + std::to_string(line_no) + ": " + message);
}

std::uint64_t parse_count(std::string_view text, std::size_t line_no) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
        fail(line_no, "count '" + std::string(text) + "' is not a nonnegative integer");
    return value;
}

}  // namespace

FieldObservations CampaignData::observations(double quadrant_area) const {
    return FieldObservations(quadrant_area, suspected_counts);
}

CategorizationCounts CampaignData::categorization() const { return CategorizationCounts(categorized_counts); }

CampaignData parse_campaign_data(std::string_view csv_text, std::span<const std::string> class_names) {
    enum class Section { Preamble, Quadrants, Classes } section = Section::Preamble;
    CampaignData data;
    data.categorized_counts.assign(class_names.size(), 0);
    bool have_version = false;
    std::set<std::string, std::less<>> seen_quadrants, seen_classes;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= csv_text.size()) {
        auto end = csv_text.find('\n', pos);
        if (end == std::string_view::npos) end = csv_text.size();
        auto line = trim(csv_text.substr(pos, end - pos));
        pos = end + 1;
        ++line_no;
        if (line.empty()) continue;
        if (line.front() == '#') {
            auto body = trim(line.substr(1));
            if (body.starts_with("schema_version=")) {
                auto v = trim(body.substr(15));
                if (v != std::to_string(campaign_schema_version))
                    fail(line_no, "unsupported schema_version '" + std::string(v) + "'");
                have_version = true;
            }
            continue;
        }
        auto fields = split(line);
        if (fields.size() != 2) fail(line_no, "expected 2 fields, found " + std::to_string(fields.size()));
        if (fields[0] == "quadrant_id" && fields[1] == "suspected_count") {
            if (section != Section::Preamble) fail(line_no, "repeated quadrant header");
            if (!have_version) fail(line_no, "missing '# schema_version=1' before the header");
            section = Section::Quadrants;
            continue;
        }
        if (fields[0] == "class_name" && fields[1] == "categorized_count") {
            if (section != Section::Quadrants) fail(line_no, "class section must follow the quadrant section");
            section = Section::Classes;
            continue;
        }
        switch (section) {
            case Section::Preamble:
                fail(line_no, "expected header 'quadrant_id,suspected_count'");
            case Section::Quadrants:
                if (fields[0].empty()) fail(line_no, "empty quadrant_id");
                if (!seen_quadrants.emplace(fields[0]).second)
                    fail(line_no, "duplicate quadrant_id '" + std::string(fields[0]) + "'");
                data.quadrant_ids.emplace_back(fields[0]);
                data.suspected_counts.push_back(parse_count(fields[1], line_no));
                break;
            case Section::Classes: {
                auto it = std::find(class_names.begin(), class_names.end(), fields[0]);
                if (it == class_names.end())
                    fail(line_no, "class '" + std::string(fields[0]) + "' is not in the configured class list");
                if (!seen_classes.emplace(fields[0]).second)
                    fail(line_no, "duplicate class '" + std::string(fields[0]) + "'");
                data.categorized_counts[static_cast<std::size_t>(it - class_names.begin())] =
                    parse_count(fields[1], line_no);
                break;
            }
        }
    }
    if (section == Section::Preamble) throw DataError("campaign data: no 'quadrant_id,suspected_count' section");
    if (data.suspected_counts.empty()) throw DataError("campaign data: no quadrant rows");

    std::uint64_t suspected = 0, categorized = 0;
    for (auto c : data.suspected_counts) suspected += c;
    for (auto c : data.categorized_counts) categorized += c;
    if (categorized > suspected)
        throw DataError("campaign data: categorized total " + std::to_string(categorized) +
                        " exceeds suspected total " + std::to_string(suspected));
    return data;
}

CampaignData load_campaign_data(const std::filesystem::path& path, std::span<const std::string> class_names) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read campaign data file '" + path.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_campaign_data(text.str(), class_names);
}

}  // namespace mpdesign::cli
