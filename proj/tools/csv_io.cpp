#include "csv_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "coagfrag/error.hpp"

namespace coagfrag::io {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            return fields;
        }
        fields.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
}

[[noreturn]] void fail(std::string_view source, std::size_t line, const std::string& what) {
    std::ostringstream msg;
    msg << source << ":" << line << ": " << what;
    throw ValidationError(msg.str());
}

}  // namespace

std::size_t CsvTable::column(std::string_view name) const {
    for (std::size_t k = 0; k < header.size(); ++k) {
        if (header[k] == name) return k;
    }
    throw ValidationError("missing column '" + std::string(name) + "'");
}

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

std::string format_csv(const CsvTable& table) {
    std::string out;
    for (std::size_t k = 0; k < table.header.size(); ++k) {
        if (k) out += ',';
        out += table.header[k];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k) out += ',';
            out += format_double(row[k]);
        }
        out += '\n';
    }
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    os << text;
    if (!os) {
        throw std::runtime_error("failed writing " + path.string());
    }
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
    write_text(path, format_csv(table));
}

CsvTable parse_csv(std::string_view text, std::string_view source) {
    CsvTable table;
    bool have_header = false;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        const std::string_view raw =
            text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
        ++line_no;

        const std::string_view line = trim(raw);
        if (line.empty()) continue;
        const auto fields = split(line);

        if (!have_header) {
            for (auto f : fields) {
                if (f.empty()) fail(source, line_no, "empty column name in header");
                table.header.emplace_back(f);
            }
            have_header = true;
            continue;
        }
        if (fields.size() != table.header.size()) {
            fail(source, line_no,
                 "expected " + std::to_string(table.header.size()) + " fields, found " +
                     std::to_string(fields.size()));
        }
        std::vector<double> row;
        row.reserve(fields.size());
        for (auto f : fields) {
            double v = 0.0;
            const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
            if (res.ec != std::errc() || res.ptr != f.data() + f.size()) {
                fail(source, line_no, "not a number: '" + std::string(f) + "'");
            }
            row.push_back(v);
        }
        table.rows.push_back(std::move(row));
    }
    if (!have_header) {
        throw ValidationError(std::string(source) + ": missing header row");
    }
    return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw ValidationError("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_csv(ss.str(), path.string());
}

}  // namespace coagfrag::io
