#include "ck/io.hpp"

#include <sstream>

#include "ck/errors.hpp"

namespace ck::io {

CsvWriter::CsvWriter(const std::filesystem::path& path,
                     std::initializer_list<const char*> header) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    out_.open(path, std::ios::binary); // binary: LF endings everywhere
    if (!out_) throw ValidationError("CsvWriter: cannot open " + path.string());
    bool first = true;
    for (const char* h : header) {
        if (!first) out_ << ',';
        out_ << h;
        first = false;
    }
    out_ << '\n';
}

void CsvWriter::row(std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
        if (!first) out_ << ',';
        out_ << num::format_shortest(v);
        first = false;
    }
    out_ << '\n';
}

void CsvWriter::raw_row(const std::string& line) { out_ << line << '\n'; }

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("write_text_file: cannot open " + path.string());
    out << content;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("read_text_file: cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace ck::io
