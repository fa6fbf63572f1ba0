#ifndef CK_IO_HPP
#define CK_IO_HPP

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

#include "ck/numerics.hpp"

namespace ck::io {

// Line-buffered CSV emitter; numbers in shortest round-trip form, LF endings.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, std::initializer_list<const char*> header);

    void row(std::initializer_list<double> values);
    void raw_row(const std::string& line);

private:
    std::ofstream out_;
};

void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

} // namespace ck::io

#endif
