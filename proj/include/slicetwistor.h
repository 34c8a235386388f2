/* C interface to the slice-regular / twistor geometry kernel.
 *
 * All functions return st_status; every other result goes through out
 * parameters. Strings returned through char** are heap-allocated and must be
 * released with st_buffer_free. Handles are opaque and freed with their
 * matching *_free function. The last error message of the calling thread is
 * available from st_last_error.
 *
 * Conventions: quaternions are double[4] as (q0, q1, q2, q3) for
 * q = q0 + q1 i + q2 j + q3 k; complex numbers are (re, im) pairs; CP^3
 * points are double[8], four complex coordinates in order.
 */
#ifndef SLICETWISTOR_H
#define SLICETWISTOR_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum st_status {
    ST_OK = 0,
    ST_ERR_INVALID_ARGUMENT = 1,
    ST_ERR_PARSE = 2,            /* syntax error in an expression or JSON */
    ST_ERR_REAL_INPUT = 3,
    ST_ERR_OUT_OF_DOMAIN = 4,
    ST_ERR_POLE = 5,
    ST_ERR_SOUTH_POLE = 6,
    ST_ERR_DEGENERATE = 7,       /* degenerate units / plane / branch */
    ST_ERR_NOT_A_STEM = 8,
    ST_ERR_ZERO_NORMAL = 9,
    ST_ERR_NOT_INVERTIBLE = 10,
    ST_ERR_XI6_VANISHES = 11,
    ST_ERR_NOT_SLICE_AFFINE = 12,
    ST_ERR_SINGULAR = 13,
    ST_ERR_WRONG_HALF_SPACE = 14,
    ST_ERR_TOO_LARGE = 15,
    ST_ERR_IO = 16,
    ST_ERR_INTERNAL = 17
} st_status;

typedef struct st_fn st_fn;
typedef struct st_surface st_surface;

const char* st_status_name(st_status s);
/* message describing the most recent failure on this thread */
const char* st_last_error(void);
void st_buffer_free(char* buf);

/* --- slice functions ------------------------------------------------------ */

/* JSON object {"g": expr, "ghat": expr, "h": expr, "hhat": expr,
 * "domain": {"re": [a,b], "im": [c,d]}}; each expr is either a grammar
 * string such as "v^2 - 1" or a nested-array tree. */
st_status st_fn_from_json(const char* json_text, st_fn** out);
st_status st_fn_from_exprs(const char* g, const char* ghat, const char* h, const char* hhat,
                           st_fn** out);
void st_fn_free(st_fn* fn);
st_status st_fn_to_json(const st_fn* fn, char** json_out);

st_status st_fn_eval(const st_fn* fn, const double q[4], double out[4]);
/* twistor lift [1, u, g - u hhat, h + u ghat]; out holds 4 complex numbers */
st_status st_fn_lift(const st_fn* fn, const double u[2], const double v[2], double out[8]);
/* twistor transform evaluated at v; out holds 6 complex numbers */
st_status st_fn_transform_at(const st_fn* fn, const double v[2], double out[12]);
/* the six transform coordinates as expression strings (JSON array) */
st_status st_fn_transform_exprs(const st_fn* fn, char** json_out);

/* --- surfaces --------------------------------------------------------------- */

/* JSON object {"degree": d, "terms": [{"exp": [e0,e1,e2,e3], "coef": [re,im]}]} */
st_status st_surface_from_json(const char* json_text, st_surface** out);
/* catalog factory, see st_fn docs: quadric_q, quaddiag(l,m,n), quadnondiag(k),
 * plane(8 reals), plane_pair, quadric_cone, cubic_nonnormal1,
 * cubic_nonnormal2, cubic_cone(re,im), quartic_scroll */
st_status st_surface_catalog(const char* name, const double* params, int nparams,
                             st_surface** out);
void st_surface_free(st_surface* s);
st_status st_surface_to_json(const st_surface* s, char** json_out);

/* membership of the lift of fn in the zero set of s, sampled */
st_status st_contains_lift(const st_surface* s, const st_fn* fn, int samples,
                           unsigned long long seed, double tol, char** report_json);
st_status st_fiber_cardinality(const st_surface* s, const double q[4], char** report_json);
/* box = 4 intervals {q0lo,q0hi,...}; res = per-axis resolutions; CSV output */
st_status st_scan(const st_surface* s, const double box[8], const int res[4], char** csv_out);

/* --- Grassmannian / OCS ----------------------------------------------------- */

/* box = {re_lo, re_hi, im_lo, im_hi} in the curve parameter */
st_status st_twistor_lines(const st_fn* fn, const double box[4], int grid, double tol,
                           char** report_json);
st_status st_affine_check(const st_fn* fn, const double A[2], const double B[2],
                          unsigned long long seed, char** report_json);
st_status st_ocs_intertwine(int samples, unsigned long long seed, char** report_json);
st_status st_ocs_preimage(const double q[4], double x_out[4]);
/* pushforward of the slice structure through fn at x: the 4x4 matrix in
 * row-major order plus its distance from left multiplication by I_x */
st_status st_ocs_pushforward(const st_fn* fn, const double x[4], double mat_out[16],
                             double* residual_out);

/* --- acceptance battery ------------------------------------------------------ */

/* canonical JSON (byte-stable for a fixed seed); exit criteria inside */
st_status st_suite(unsigned long long seed, char** report_json);

#ifdef __cplusplus
}
#endif

#endif /* SLICETWISTOR_H */
