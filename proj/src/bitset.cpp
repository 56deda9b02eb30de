#include "pasv/bitset.hpp"

namespace pasv {

std::string Bitset::canonical_key() const {
    if (n_ <= 64) {
        std::uint64_t mask = words_.empty() ? 0 : words_[0];
        if (mask == 0) return "0";
        static const char* digits = "0123456789abcdef";
        std::string out;
        while (mask) {
            out.insert(out.begin(), digits[mask & 0xf]);
            mask >>= 4;
        }
        return out;
    }
    std::string out;
    for_each([&](int i) {
        if (!out.empty()) out += '-';
        out += std::to_string(i);
    });
    return out;
}

} // namespace pasv
