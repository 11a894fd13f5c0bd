# Tests for the stopord package
