"""Walk from a single-locality code to a two-locality one by shortening.

Builds the [12,6,6] polynomial-evaluation code over GF(13) in which every
coordinate is repairable from 3 others, certifies it against the
size/locality Singleton-type bound, then deletes one information coordinate
to obtain an [11,5,6] code whose first three coordinates become 2-local.
The locality profile of the shortened code is predicted combinatorially
first and then recomputed from scratch, and both codes' optimality
certificates are printed.

Run:  python3 demos/shorten_for_two_localities.py
Everything is deterministic; no flags, no randomness.
"""

from mllrc import (
    certify,
    full_analysis,
    ml_singleton,
    predict_shortened_profile,
    render_analysis_text,
    render_certificate_text,
    tamo_barg,
)

q, n, k, r = 13, 12, 6, 3

print(f"constructing the [{n},{k}] {r}-local code over GF({q}) ...")
base = tamo_barg(q, n, k, r)
base_cert = certify(base)
print(render_certificate_text(base_cert))
print()

profile = base_cert.profile.shape()
predicted = predict_shortened_profile(profile, 1)
print(f"profile before shortening : {profile}")
print(f"predicted after shortening: {predicted}")
print(f"distance bound on the prediction: "
      f"{ml_singleton(predicted, k - 1).bound_value}")
print()

print("shortening at the first coordinate ...")
shortened = base.shorten(0)
report = full_analysis(shortened)
assert report.certificate.profile.shape() == predicted
print(render_analysis_text(report))
print()

print("the recomputed profile matches the prediction, and the shortened")
print("code still attains its Singleton-type distance bound:")
print(f"  singleton_optimal = {report.certificate.singleton_optimal}")
