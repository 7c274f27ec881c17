#ifndef SGGAN_VERSION_HPP
#define SGGAN_VERSION_HPP

namespace sggan {

inline constexpr const char* kToolkitVersion = "0.1.0";

}

#endif
