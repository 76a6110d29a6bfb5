# Quarterplane Tests
