#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace yaglom {

std::string sha256_hex(std::span<const unsigned char> data);
std::string sha256_hex(const std::string& data);
std::string sha256_file(const std::string& path);  // throws io_error

}  // namespace yaglom
