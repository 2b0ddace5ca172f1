#ifndef RBK_VERSION_HPP
#define RBK_VERSION_HPP

namespace rbk {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace rbk

#endif
