"""Linear systems of plane cubics over finite fields."""
