"""Small reference channels used in the demos and tests."""
from .channel import WiretapChannel, constant_channel, identity_channel, make_channel

A4 = ("a1", "a2", "a3", "a4")
A3 = ("a1", "a2", "a3")


def singleton_necessity_channel() -> WiretapChannel:
    """Four inputs, b2 shared by a2/a3; eavesdropper sees c1 for a1,a2 and c2 for a3,a4.

    Only a code with the class {a2, a3} carries three secure messages.
    """
    main = make_channel(A4, ("b1", "b2", "b3"), {"a1": {"b1"}, "a2": {"b2"}, "a3": {"b2"}, "a4": {"b3"}})
    eaves = make_channel(A4, ("c1", "c2"), {"a1": {"c1"}, "a2": {"c1"}, "a3": {"c2"}, "a4": {"c2"}})
    return WiretapChannel(main, eaves)


def superactivation_channel() -> WiretapChannel:
    """Path-shaped main channel with no secure blocklength-1 code but a (4,2)-code."""
    main = make_channel(
        A4,
        ("b1", "b2", "b3"),
        {"a1": {"b1"}, "a2": {"b1", "b2"}, "a3": {"b2", "b3"}, "a4": {"b3"}},
    )
    eaves = make_channel(
        A4,
        ("c1", "c2"),
        {"a1": {"c1"}, "a2": {"c1", "c2"}, "a3": {"c1", "c2"}, "a4": {"c2"}},
    )
    return WiretapChannel(main, eaves)


def _injective_main(symbols=A3):
    return make_channel(symbols, tuple("b" + s[1:] for s in symbols), {a: {"b" + a[1:]} for a in symbols})


def cascade_channel() -> WiretapChannel:
    """Injective main channel whose eavesdropper pins a1, then a2, then a3."""
    eaves = make_channel(A3, ("c1", "c2", "c3"), {"a1": {"c1", "c2"}, "a2": {"c2", "c3"}, "a3": {"c3"}})
    return WiretapChannel(_injective_main(), eaves)


def no_singleton_channel() -> WiretapChannel:
    """Injective main channel where no eavesdropper output pins an input."""
    eaves = make_channel(A3, ("c1", "c2"), {"a1": {"c1"}, "a2": {"c1", "c2"}, "a3": {"c2"}})
    return WiretapChannel(_injective_main(), eaves)


def pinned_a1_channel() -> WiretapChannel:
    """Injective main channel; c1 pins a1 while a2 and a3 share c2."""
    eaves = make_channel(A3, ("c1", "c2"), {"a1": {"c1"}, "a2": {"c2"}, "a3": {"c2"}})
    return WiretapChannel(_injective_main(), eaves)


def blind_eavesdropper_channel(size: int = 3) -> WiretapChannel:
    """Noiseless main channel, eavesdropper always sees the same symbol."""
    symbols = tuple(f"a{i}" for i in range(1, size + 1))
    return WiretapChannel(identity_channel(symbols), constant_channel(symbols, "c1"))


def transparent_eavesdropper_channel(size: int = 3) -> WiretapChannel:
    """Noiseless main channel and noiseless eavesdropper: nothing is secure."""
    symbols = tuple(f"a{i}" for i in range(1, size + 1))
    return WiretapChannel(identity_channel(symbols), identity_channel(symbols))


def half_exposed_channel() -> WiretapChannel:
    """Noiseless main channel over four inputs; the eavesdropper pins a3 and a4.

    Only {a1},{a2} is secure, while the main channel alone carries four messages,
    so fast plants need the two-phase construction.
    """
    eaves = make_channel(A4, ("c1", "c2", "c3"), {"a1": {"c1"}, "a2": {"c1"}, "a3": {"c2"}, "a4": {"c3"}})
    return WiretapChannel(identity_channel(A4), eaves)
