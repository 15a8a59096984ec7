int ok_null_after_free() {
    int *p = malloc(4);
    free(p);
    p = 0;
    return 0;
}
