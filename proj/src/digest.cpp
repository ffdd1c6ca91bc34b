#include "triplesim/digest.hpp"

#include <array>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "triplesim/errors.hpp"

namespace triplesim {

std::string sha256_hex(std::string_view bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> raw{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), raw.data(), &len, EVP_sha256(), nullptr) != 1)
        throw Error("SHA-256 computation failed");

    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[raw[i] >> 4];
        out += hex[raw[i] & 0x0f];
    }
    return out;
}

std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return sha256_hex(buf.str());
}

}  // namespace triplesim
