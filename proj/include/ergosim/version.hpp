#ifndef ERGOSIM_VERSION_HPP
#define ERGOSIM_VERSION_HPP

namespace ergosim
{
inline constexpr const char* kVersion = "1.0.0";
}

#endif
