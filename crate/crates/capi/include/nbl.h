/* C interface to the nbl Hurwitz-component library.
 *
 * Groups are opaque handles; structured results are returned as JSON or CSV
 * strings owned by the library and released with nbl_string_free(). Fallible
 * calls return an NblStatus; nbl_last_error() gives the message for the most
 * recent failure on the calling thread (valid until the next failing call,
 * not to be freed).
 */

#ifndef NBL_H
#define NBL_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum NblStatus {
  NBL_OK = 0,
  NBL_INVALID_INPUT = 1,
  NBL_BUDGET_EXCEEDED = 2,
  NBL_INTERNAL_ERROR = 3,
  NBL_NULL_POINTER = 4,
} NblStatus;

typedef struct NblGroup NblGroup;

const char *nbl_last_error(void);
const char *nbl_version(void);

/* Group description language: S<n>, A<n>, D<n>, C<n>, GDih(n1,...,nk),
 * perm(<degree>; <cycles>, <cycles>, ...). */
NblStatus nbl_group_parse(const char *spec, NblGroup **out);
void nbl_group_free(NblGroup *group);

uint64_t nbl_group_order(const NblGroup *group);
uint32_t nbl_group_degree(const NblGroup *group);
uint32_t nbl_group_class_count(const NblGroup *group);

/* Conjugacy classes as a JSON document. */
NblStatus nbl_classes_json(const NblGroup *group, char **out_json);

/* Braid-orbit components of the degree-r Nielsen set. options_json may be
 * NULL (projective, marked, any cover, all classes) or a document like
 *   {"base":"p1","equiv":"marked","cover":"galois","classes":["(1 2)"]}.
 */
NblStatus nbl_components_json(const NblGroup *group, uint32_t r,
                              const char *options_json, char **out_json);

/* Component counts for r_min..r_max inclusive, as "r,count" CSV. */
NblStatus nbl_series_csv(const NblGroup *group, uint32_t r_min, uint32_t r_max,
                         const char *options_json, char **out_csv);

/* Global rationality of a class multiset, e.g. {"(1 2 3)": 2}. */
NblStatus nbl_rational_json(const NblGroup *group, const char *ici_json,
                            char **out_json);

void nbl_string_free(char *s);

#ifdef __cplusplus
}
#endif

#endif /* NBL_H */
