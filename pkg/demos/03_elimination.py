"""Secrecy over a noiseless main channel: peel off what the eavesdropper can pin down."""
from uwc import count_secure_words, eliminate, injective_secrecy_capacity, load_channel

from _paths import channel_path

for name in ("cascade.uwc", "pinned_a1.uwc", "no_singleton.uwc"):
    W = load_channel(channel_path(name))
    trace = eliminate(W, 1)
    print(f"{name}: {trace.S} removal step(s)")
    for step in trace.steps:
        for word in step.removed:
            print(f"  step {step.step}: remove {''.join(word)} (isolated by {step.generators[word]})")
    cap = injective_secrecy_capacity(W)
    print(f"  secrecy capacity {cap.capacity:.3f} bits/use")
    for n in (1, 2, 3):
        c = count_secure_words(W, n)
        print(f"  n={n}: {c.N} secure words (guaranteed at least {c.bound})")
