int ok_use_before_free() {
    int *p = malloc(4);
    *p = 3;
    int x = *p;
    free(p);
    return x;
}
