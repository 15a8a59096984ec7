int leak_plain() {
    int *p = malloc(4);
    return 0;
}
