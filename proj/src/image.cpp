#include "enrich/image.hpp"

namespace enrich {
template class Image<std::uint8_t>;
template class Image<std::uint16_t>;
template class Image<double>;
template class Image<std::int32_t>;
}  // namespace enrich
