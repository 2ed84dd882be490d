#ifndef DEPROV_H
#define DEPROV_H

/* This file is generated by cbindgen from de-prov-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes returned by every fallible function.
typedef enum DeProvStatus {
  DE_PROV_STATUS_OK = 0,
  // The input text failed to parse; see the last error message.
  DE_PROV_STATUS_PARSE_ERROR = 1,
  // The JSON input violated the document schema.
  DE_PROV_STATUS_SCHEMA_ERROR = 2,
  // The operation is not supported by the document's encoding mode.
  DE_PROV_STATUS_UNSUPPORTED_FEATURE = 3,
  // A node or environment id does not exist in the document.
  DE_PROV_STATUS_UNKNOWN_NODE = 4,
  // A malformed argument (bad mode name, bad fixture name, bad id).
  DE_PROV_STATUS_INVALID_ARGUMENT = 5,
  // An argument was not valid UTF-8.
  DE_PROV_STATUS_UTF8_ERROR = 6,
  // A required pointer argument was null.
  DE_PROV_STATUS_NULL_POINTER = 7,
} DeProvStatus;

// Opaque provenance document handle.
typedef struct DeProvDocument DeProvDocument;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Last error message for this thread; valid until the next failing call.
// Never null.
const char *deprov_last_error_message(void);

// Frees a string returned by this library.
//
// # Safety
// `s` must be a pointer previously returned through an out-parameter of this
// library, not yet freed. Null is ignored.
void deprov_string_free(char *s);

// Frees a document handle.
//
// # Safety
// `doc` must be a pointer previously returned by a constructor, not yet
// freed. Null is ignored.
void deprov_document_free(struct DeProvDocument *doc);

// Parses extended-notation text into a new document handle.
//
// # Safety
// `text` must be a valid NUL-terminated C string; `out` must be a valid
// pointer to receive the handle.
enum DeProvStatus deprov_parse_text(const char *text, struct DeProvDocument **out);

// Parses the JSON form into a new document handle.
//
// # Safety
// As for [`deprov_parse_text`].
enum DeProvStatus deprov_parse_json(const char *text, struct DeProvDocument **out);

// Builds one of the shipped fixtures (`gond-nrds`, `clinical-trial`) in the
// given encoding mode (`bundle`, `namespace`, `namespaces+`, `bundles+`).
//
// # Safety
// `name` and `mode` must be valid NUL-terminated C strings; `out` must be a
// valid pointer to receive the handle.
enum DeProvStatus deprov_fixture(const char *name, const char *mode, struct DeProvDocument **out);

// The document's encoding mode name.
//
// # Safety
// `doc` must be a live handle; `out` receives a new string.
enum DeProvStatus deprov_document_mode(const struct DeProvDocument *doc, char **out);

// Serializes to canonical extended-notation text.
//
// # Safety
// `doc` must be a live handle; `out` receives a new string.
enum DeProvStatus deprov_to_provn(const struct DeProvDocument *doc, char **out);

// Serializes to the canonical JSON form.
//
// # Safety
// `doc` must be a live handle; `out` receives a new string.
enum DeProvStatus deprov_to_json(const struct DeProvDocument *doc, char **out);

// Renders DOT text with default options.
//
// # Safety
// `doc` must be a live handle; `out` receives a new string.
enum DeProvStatus deprov_to_dot(const struct DeProvDocument *doc, char **out);

// Exports strictly standard PROV-N; the document must be in bundles+ mode.
//
// # Safety
// `doc` must be a live handle; `out` receives a new string.
enum DeProvStatus deprov_export_flattened(const struct DeProvDocument *doc, char **out);

// Runs inference plus all constraint checks; returns the report as JSON.
//
// # Safety
// `doc` must be a live handle; `out` receives a new string.
enum DeProvStatus deprov_validate_json(const struct DeProvDocument *doc, char **out);

// Whether validation finds no error-severity findings.
//
// # Safety
// `doc` must be a live handle; `out_valid` must be a valid pointer.
enum DeProvStatus deprov_document_is_valid(const struct DeProvDocument *doc, bool *out_valid);

// Per-requirement assessment of the document, as JSON.
//
// # Safety
// `doc` must be a live handle; `out` receives a new string.
enum DeProvStatus deprov_assess_json(const struct DeProvDocument *doc, char **out);

// Downstream chain from `node`, as JSON.
//
// # Safety
// `doc` must be a live handle; `node` a valid C string; `out` receives a
// new string.
enum DeProvStatus deprov_forward_chain_json(const struct DeProvDocument *doc,
                                            const char *node,
                                            char **out);

// Upstream chain from `node`, as JSON.
//
// # Safety
// As for [`deprov_forward_chain_json`].
enum DeProvStatus deprov_backward_chain_json(const struct DeProvDocument *doc,
                                             const char *node,
                                             char **out);

// Controllers of an environment (direct and inherited), as JSON.
//
// # Safety
// As for [`deprov_forward_chain_json`].
enum DeProvStatus deprov_controllers_json(const struct DeProvDocument *doc,
                                          const char *env,
                                          char **out);

// The constant 8x4 requirement-support matrix, as JSON.
//
// # Safety
// `out` must be a valid pointer; it receives a new string.
enum DeProvStatus deprov_support_matrix_json(char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DEPROV_H */
