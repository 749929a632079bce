"""Close-up processes, ordinal circles, Toeplitz encodings and entropy-pair supershifts."""
