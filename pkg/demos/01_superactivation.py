"""Longer blocks can unlock secrecy that single symbols cannot.

The main channel confuses neighbouring inputs and the eavesdropper sees a
coarse two-letter summary.  No secure code exists one symbol at a time, yet
pairs of symbols carry four secure messages.
"""
from uwc import SearchBudget, load_channel, max_wiretap_code, search_wiretap_code, wiretap_code_profile
from uwc.search import wiretap_exists_exhaustively

from _paths import channel_path

W = load_channel(channel_path("fig2.uwc"))
unbounded = SearchBudget(max_class_size=None)

for M in (2, 3, 4):
    exists, proven = wiretap_exists_exhaustively(W, 1, M, unbounded)
    print(f"n=1, M={M}: code exists={exists} (proof complete: {proven})")

result = search_wiretap_code(W, 2, 4)
print("\nn=2, M=4 code (classes listed by message):")
for m, cls in enumerate(result.code.sorted_classes(W.input), start=1):
    print(f"  {m}: {', '.join(''.join(w) for w in cls)}")
profile = wiretap_code_profile(W, result.code)
print(f"valid={profile.valid}, L={profile.L}")

best = max_wiretap_code(W, 2)
print(f"\nlargest secure code at n=2: M={best.M} (exhaustive={best.exhaustive})")
