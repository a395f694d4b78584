"""Why a message sometimes needs more than one codeword.

With one codeword per message only two secure messages fit.  Letting the
middle message use two inputs that the receiver cannot tell apart, but the
eavesdropper sees differently, raises the count to three.
"""
from uwc import Code, SearchBudget, load_channel, search_wiretap_code, wiretap_code_profile
from uwc.search import delta_n, max_wiretap_code

from _paths import channel_path

W = load_channel(channel_path("fig1.uwc"))

singles = max_wiretap_code(W, 1, SearchBudget(max_class_size=1))
print("one codeword per message:", singles.M, "messages")
free = search_wiretap_code(W, 1, 3, SearchBudget(max_class_size=None))
print("classes of any size:", [sorted(w[0] for w in c) for c in free.code.classes])

pair = Code.from_classes([["a1"], ["a4"]])
profile = wiretap_code_profile(W, pair)
print(f"\n{{a1}},{{a4}}: valid={profile.valid}; first violation: {profile.violation} at {profile.detail}")

d = delta_n(W, 1, SearchBudget(max_class_size=None))
print(f"\nbest (L-1)/(M-1) at n=1: {d.delta} with M={d.M}, L={d.L}")
