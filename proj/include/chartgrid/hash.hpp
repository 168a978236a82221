#pragma once

#include <openssl/evp.h>

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "chartgrid/errors.hpp"

namespace chartgrid {

/// Incremental SHA-256 producing lowercase hex.
class Sha256 {
public:
    Sha256() : ctx_(EVP_MD_CTX_new())
    {
        if (!ctx_ || EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1)
            throw Error("SHA-256 initialisation failed");
    }
    ~Sha256() { EVP_MD_CTX_free(ctx_); }
    Sha256(const Sha256&) = delete;
    Sha256& operator=(const Sha256&) = delete;

    Sha256& update(std::span<const std::uint8_t> data)
    {
        EVP_DigestUpdate(ctx_, data.data(), data.size());
        return *this;
    }

    Sha256& update(std::string_view s)
    {
        EVP_DigestUpdate(ctx_, s.data(), s.size());
        return *this;
    }

    /// Length-prefixed field, so concatenation boundaries cannot collide.
    Sha256& field(std::string_view s)
    {
        std::uint64_t n = s.size();
        std::array<std::uint8_t, 8> len{};
        for (int i = 0; i < 8; ++i)
            len[i] = static_cast<std::uint8_t>(n >> (8 * i));
        update(len);
        return update(s);
    }

    std::string hex()
    {
        std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
        unsigned int len = 0;
        EVP_DigestFinal_ex(ctx_, md.data(), &len);
        static constexpr char digits[] = "0123456789abcdef";
        std::string out;
        out.reserve(len * 2);
        for (unsigned int i = 0; i < len; ++i) {
            out.push_back(digits[md[i] >> 4]);
            out.push_back(digits[md[i] & 0xf]);
        }
        return out;
    }

private:
    EVP_MD_CTX* ctx_;
};

inline std::string sha256_hex(std::string_view s)
{
    return Sha256{}.update(s).hex();
}

inline std::string base64_encode(std::span<const std::uint8_t> data)
{
    std::string out(4 * ((data.size() + 2) / 3), '\0');
    int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), data.data(), static_cast<int>(data.size()));
    out.resize(static_cast<std::size_t>(n));
    return out;
}

} // namespace chartgrid
