"""Classification of finite abelian group actions on surfaces by generating vectors."""
