#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include "ffs/bytes.hpp"
#include "ffs/error.hpp"

namespace ffsuite {

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoError, "cannot open " + path);
    std::string out((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return out;
}

inline Bytes read_binary_file(const std::string& path) {
    std::string s = read_text_file(path);
    return Bytes(s.begin(), s.end());
}

inline void write_file(const std::string& path, std::string_view data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoError, "cannot write " + path);
    out.write(data.data(), std::streamsize(data.size()));
    if (!out) throw Error(Errc::IoError, "short write to " + path);
}

inline void write_file(const std::string& path, std::span<const uint8_t> data) {
    write_file(path, std::string_view(reinterpret_cast<const char*>(data.data()), data.size()));
}

}  // namespace ffsuite
