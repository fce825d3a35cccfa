def flatten(nested):
    out = []
    for part in nested:
        out.extend(part)
    return out
