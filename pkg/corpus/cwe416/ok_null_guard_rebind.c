int ok_null_guard_rebind() {
    int *p = malloc(4);
    free(p);
    p = 0;
    return 0;
}
