#include "ppower/census_kernel.hpp"

namespace ppower {

PowerImage power_image_reference(const FieldPtr& field, unsigned n, std::uint64_t m, std::uint64_t max_elements) {
  const MatrixSpace base = MatrixSpace::unitriangular(field, n);
  if (base.size() > max_elements) throw SizeGuardError("reference census over its element limit");
  PowerImage image{power_domain(field, n, m), m, Bitmap{}, base.size(), 0};
  image.members = Bitmap(image.domain.size());
  for (std::uint64_t key = 0; key < base.size(); ++key) {
    const TriMatrix power = mat_pow_repeated(base.decode(key), m);
    if (!image.domain.contains(power)) {
      ++image.overflow;
      continue;
    }
    image.members.set(image.domain.encode(power).value);
  }
  return image;
}

}  // namespace ppower
