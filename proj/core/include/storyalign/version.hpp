// storyalign/version.hpp

#ifndef STORYALIGN_VERSION_HPP_
#define STORYALIGN_VERSION_HPP_

namespace storyalign {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace storyalign

#endif  // STORYALIGN_VERSION_HPP_
