"""Short non-solutions of word equations with constants in linear groups."""
