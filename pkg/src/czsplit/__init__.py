"""Cantor-Zassenhaus splitting over GF(p^m) with exact character-sum oracles."""
