#ifndef EFFCAP_VERSION_HPP
#define EFFCAP_VERSION_HPP

namespace effcap {

inline constexpr const char* kVersion = "1.0.0";

// Recorded in every output file so results can be tied to the exact sampler.
inline constexpr const char* kRngDescription = "std::mt19937_64 + inverse-cdf";

}  // namespace effcap

#endif
